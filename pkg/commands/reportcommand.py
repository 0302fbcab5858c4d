"""
ReportCommand: the whole pipeline, stage by stage, for a user state and a
canonical ensemble state.

Stages are keyed by the equation they reproduce (eq2 ... eq14); a key with
a `_closed_form` suffix holds the written-out matrix next to the numeric one.
"""
import math

from commands.command import Command
from loccverifier import (
    apply_machine_b2,
    build_locc_resource,
    closed_form_rho_after_locc,
    closed_form_rho_after_locc_complex,
    closed_form_rho_before_locc,
    locc_verdict,
)
from numericcore import hermitian_eigenvalues
from qubitmodel import EnsembleParam, QubitSpec, concretize, ensemble_state
from reportwriter import CommandResult, format_matrix, format_number, matrix_to_pairs, vector_to_pairs
from signallingverifier import (
    apply_machine_bob,
    build_signalling_resource,
    closed_form_rho_after,
    closed_form_rho_before,
    signalling_verdict,
)

DEFAULT_STATE = QubitSpec(complex(math.sqrt(0.5), 0.0), complex(0.0, math.sqrt(0.5)))
CANONICAL_ENSEMBLE = EnsembleParam(1.0 / math.sqrt(3.0), 1)

STAGE_TITLES = {
    "eq2": "signalling resource",
    "eq3": "Alice before Bob acts",
    "eq3_closed_form": "Alice before Bob acts, written out",
    "eq4": "signalling resource after the machine",
    "eq5": "Alice after the machine",
    "eq5_closed_form": "Alice after the machine, written out",
    "eq7": "product resource",
    "eq9": "Alice before Bob acts on B2",
    "eq9_closed_form": "Alice before Bob acts on B2, written out",
    "eq10": "product resource after the machine on B2",
    "eq11": "Alice after the machine on B2, complex amplitudes",
    "eq12": "Alice after the machine on B2",
    "eq12_closed_form": "Alice after the machine on B2, real components",
}


class ReportCommand(Command):
    """Print every intermediate state and matrix of both protocols."""

    name = "report"
    help = "reproduce both protocols stage by stage"

    def add_arguments(self, parser):
        self.add_state_arguments(parser)

    def _stages(self, psi, config):
        signalling = signalling_verdict(psi, config.tolerance)
        locc = locc_verdict(psi, config.tolerance, config.constraint_tolerance)
        vectors = {
            "eq2": concretize(build_signalling_resource(psi)).amplitudes,
            "eq4": concretize(apply_machine_bob(build_signalling_resource(psi))).amplitudes,
            "eq7": concretize(build_locc_resource(psi)).amplitudes,
            "eq10": concretize(apply_machine_b2(build_locc_resource(psi))).amplitudes,
        }
        matrices = {
            "eq3": signalling.rho_before.entries,
            "eq3_closed_form": closed_form_rho_before(psi),
            "eq5": signalling.rho_after.entries,
            "eq5_closed_form": closed_form_rho_after(psi),
            "eq9": locc.rho_before.entries,
            "eq9_closed_form": closed_form_rho_before_locc(psi),
            "eq11": closed_form_rho_after_locc_complex(psi),
            "eq12": locc.rho_after.entries,
            "eq12_closed_form": closed_form_rho_after_locc(psi),
        }
        verdict = {
            "signalling_distance": signalling.distance,
            "signalling": signalling.signalling,
            "spectra_equal": signalling.spectra_equal,
            "signalling_spectrum": list(signalling.rho_before.spectrum.eigenvalues),
            "locc_before_eigenvalues": list(locc.rho_before.spectrum.eigenvalues),
            "normalization": locc.normalization,
            "eq13": [locc.lambda_plus, locc.lambda_minus],
            "eq13_numeric": list(hermitian_eigenvalues(locc.rho_after).eigenvalues),
            "entropy_before": locc.entropy_before,
            "entropy_after": locc.entropy_after,
            "eq14": locc.constraint_residual,
            "residual_entropy": locc.residual_entropy,
            "violation": locc.violation,
            "constraint_violated": locc.constraint_violated,
        }
        return vectors, matrices, verdict, signalling.signalling or locc.violation

    def _section(self, title, psi, vectors, matrices, verdict):
        lines = [f"== {title}: a = {format_number(psi.a.real)} {format_number(psi.a.imag)}i, "
                 f"b = {format_number(psi.b.real)} {format_number(psi.b.imag)}i"]
        for name, amplitudes in vectors.items():
            lines.append(f"{name} ({STAGE_TITLES[name]}):")
            lines.append("  " + ", ".join(f"{z.real:+.6f}{z.imag:+.6f}i" for z in amplitudes))
        for name, matrix in matrices.items():
            lines.append(f"{name} ({STAGE_TITLES[name]}):")
            lines.extend(format_matrix(matrix))
        lines.extend(self.describe(verdict))
        return lines

    def execute(self, config):
        user = config.qubit or DEFAULT_STATE
        ensemble = ensemble_state(CANONICAL_ENSEMBLE)
        lines = []
        sections = {}
        violation = False
        for key, title, psi in (("user", "user state", user), ("ensemble", "ensemble state", ensemble)):
            vectors, matrices, verdict, flagged = self._stages(psi, config)
            violation = violation or (flagged and key == "user")
            lines.extend(self._section(title, psi, vectors, matrices, verdict))
            lines.append("")
            sections[key] = {
                "input": self.qubit_document(psi),
                "verdict": verdict,
                "states": {name: vector_to_pairs(v) for name, v in vectors.items()},
                "matrices": {name: matrix_to_pairs(m) for name, m in matrices.items()},
            }
        document = self.document(
            config,
            input=sections["user"]["input"],
            verdict=sections["user"]["verdict"],
            matrices=sections["user"]["matrices"],
            states=sections["user"]["states"],
            ensemble=sections["ensemble"],
        )
        return CommandResult(document=document, lines=lines[:-1], violation=violation)

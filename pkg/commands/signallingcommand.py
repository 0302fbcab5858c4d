"""
SignallingCommand: the no-signalling protocol on one state.
"""
from commands.command import Command
from reportwriter import CommandResult, format_matrix, matrix_to_pairs
from signallingverifier import signalling_verdict


class SignallingCommand(Command):
    """Alice's reduced state before and after Bob runs the machine."""

    name = "signalling"
    help = "run the no-signalling protocol"

    def add_arguments(self, parser):
        self.add_state_arguments(parser)

    def execute(self, config):
        psi = self.require_qubit(config)
        verdict = signalling_verdict(psi, config.tolerance)
        summary = {
            "distance": verdict.distance,
            "residual_alpha": verdict.residual_alpha,
            "residual_beta": verdict.residual_beta,
            "signalling": verdict.signalling,
            "spectra_equal": verdict.spectra_equal,
        }
        lines = self.describe(summary)
        lines.append("eq3 (rho_before):")
        lines.extend(format_matrix(verdict.rho_before.entries))
        lines.append("eq5 (rho_after):")
        lines.extend(format_matrix(verdict.rho_after.entries))
        document = self.document(
            config,
            input=self.qubit_document(psi),
            verdict=summary,
            matrices={
                "eq3": matrix_to_pairs(verdict.rho_before.entries),
                "eq5": matrix_to_pairs(verdict.rho_after.entries),
            },
        )
        return CommandResult(document=document, lines=lines, violation=verdict.signalling)

"""
LoccCommand: the entanglement-monotonicity protocol on one state.
"""
from commands.command import Command
from loccverifier import locc_verdict
from reportwriter import CommandResult, format_matrix, matrix_to_pairs


class LoccCommand(Command):
    """Entropy of Alice's state before and after Bob runs the machine on B2."""

    name = "locc"
    help = "run the entanglement-monotonicity protocol"

    def add_arguments(self, parser):
        self.add_state_arguments(parser)
        parser.add_argument("--constraint-tol", type=float,
                            help="tolerance on the entropy implied by the constraint residual (default: --tol)")

    def execute(self, config):
        psi = self.require_qubit(config)
        verdict = locc_verdict(psi, config.tolerance, config.constraint_tolerance)
        summary = {
            "entropy_before": verdict.entropy_before,
            "entropy_after": verdict.entropy_after,
            "normalization": verdict.normalization,
            "lambda_plus": verdict.lambda_plus,
            "lambda_minus": verdict.lambda_minus,
            "constraint_residual": verdict.constraint_residual,
            "residual_entropy": verdict.residual_entropy,
            "violation": verdict.violation,
            "constraint_violated": verdict.constraint_violated,
            "resource_renormalized": verdict.resource_renormalized,
        }
        lines = self.describe(summary)
        lines.append("eq9 (rho_before):")
        lines.extend(format_matrix(verdict.rho_before.entries))
        lines.append("eq12 (rho_after):")
        lines.extend(format_matrix(verdict.rho_after.entries))
        document = self.document(
            config,
            input=self.qubit_document(psi),
            verdict=summary,
            matrices={
                "eq9": matrix_to_pairs(verdict.rho_before.entries),
                "eq12": matrix_to_pairs(verdict.rho_after.entries),
            },
        )
        return CommandResult(document=document, lines=lines, violation=verdict.violation)

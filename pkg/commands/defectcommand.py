"""
DefectCommand: how far the linear Hadamard gate is from the machine on one state.
"""
from commands.command import Command
from constants import ENSEMBLE_TOLERANCE
from qubitmodel import bloch_coordinates, in_ensemble, ray_defect, universality_defect
from reportwriter import CommandResult


class DefectCommand(Command):
    """Universality defect, ensemble membership and Bloch coordinates."""

    name = "defect"
    help = "compare the Hadamard matrix with the universal machine on one state"

    def add_arguments(self, parser):
        self.add_state_arguments(parser)

    def execute(self, config):
        psi = self.require_qubit(config)
        defect = universality_defect(psi)
        member = in_ensemble(psi, ENSEMBLE_TOLERANCE)
        bloch = bloch_coordinates(psi)
        verdict = {
            "universality_defect": defect,
            "ray_defect": ray_defect(psi),
            "in_ensemble": member,
            "bloch": list(bloch),
        }
        lines = self.describe({
            "universality_defect": defect,
            "ray_defect": verdict["ray_defect"],
            "in_ensemble": member,
            "generic": psi.is_generic,
            "bloch": bloch,
        })
        return CommandResult(
            document=self.document(config, input=self.qubit_document(psi), verdict=verdict),
            lines=lines,
            violation=not member,
        )

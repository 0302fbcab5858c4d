"""
CharacterizeCommand: grid sweeps and Bloch trajectories as tables.
"""
import dataclasses

from characterization import TRAJECTORY_KINDS, sweep, trajectory
from commands.command import Command
from reportwriter import CommandResult, Table

SWEEP_COLUMNS = (
    "theta", "phi", "chi", "x", "y", "z",
    "signalling_distance", "entropy_after", "constraint_residual", "in_ensemble",
)
TRAJECTORY_COLUMNS = ("beta", "x", "y", "z")


class CharacterizeCommand(Command):
    """Classify a grid of states, or emit an ensemble trajectory."""

    name = "characterize"
    help = "sweep the state space or emit Bloch trajectories"
    default_format = "csv"

    def add_arguments(self, parser):
        parser.add_argument("--theta", type=int, default=10, help="grid points over theta in [0, pi]")
        parser.add_argument("--phi", type=int, default=10, help="grid points over phi in [0, 2 pi)")
        parser.add_argument("--chi", type=int, default=1, help="grid points over the global phase")
        parser.add_argument("--workers", type=int, default=1, help="worker processes for the sweep")
        parser.add_argument("--trajectory", choices=TRAJECTORY_KINDS,
                            help="emit the Bloch trajectory instead of a grid sweep")
        parser.add_argument("--points", type=int, default=41, help="beta samples per trajectory branch")

    def execute(self, config):
        if config.trajectory is not None:
            rows = trajectory(config.points, config.trajectory)
            table = Table(TRAJECTORY_COLUMNS, [(p.beta, p.x, p.y, p.z) for p in rows])
            document = self.document(
                config,
                input={"trajectory": config.trajectory, "points": config.points},
                records=[dataclasses.asdict(p) for p in rows],
            )
            return CommandResult(document=document, table=table)

        records = sweep(config.grid, workers=config.workers, tol=config.tolerance)
        table = Table(SWEEP_COLUMNS, [tuple(getattr(r, c) for c in SWEEP_COLUMNS) for r in records])
        disagreements = sum(
            not r.indicators_agree(config.tolerance, config.constraint_tolerance) for r in records
        )
        document = self.document(
            config,
            input={
                "theta_points": config.grid.theta_points,
                "phi_points": config.grid.phi_points,
                "chi_points": config.grid.chi_points,
            },
            verdict={
                "records": len(records),
                "in_ensemble": sum(r.in_ensemble for r in records),
                "disagreements": disagreements,
            },
            records=[{c: getattr(r, c) for c in SWEEP_COLUMNS} for r in records],
        )
        return CommandResult(document=document, table=table, violation=disagreements > 0)

"""Complete-system generators: grid surveillance drones, 3-CNF
satisfiability reductions and bounded-tape machine encodings."""

from .drone import DroneParams, gen_drone, greedy_action
from .sat import Cnf3, gen_3sat
from .turing import TmSpec, gen_tm

__all__ = [
    "DroneParams",
    "gen_drone",
    "greedy_action",
    "Cnf3",
    "gen_3sat",
    "TmSpec",
    "gen_tm",
]

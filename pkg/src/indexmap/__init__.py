"""Index maps for lattices over discrete valuation rings.

Exact arithmetic over F_p[[t]] and Z_p, lattices and their torsion
quotients, poset-indexed diagrams, S-chain objects and finite checks on
nerves of small categories.
"""
from .dvr import RingConfig
from .errors import IndexMapError
from .lattice import Lattice, act, inf, rel_index, standard_lattice, sup
from .linalg import Matrix
from .schain import GroupTuple, LatticeChain, LatticeTuple, index_of_chain, index_of_tuple, l_map
from .torsion import ModuleMap, TorsionModule

__version__ = "0.1.0"

__all__ = [
    "GroupTuple",
    "IndexMapError",
    "Lattice",
    "LatticeChain",
    "LatticeTuple",
    "Matrix",
    "ModuleMap",
    "RingConfig",
    "TorsionModule",
    "act",
    "index_of_chain",
    "index_of_tuple",
    "inf",
    "l_map",
    "rel_index",
    "standard_lattice",
    "sup",
]

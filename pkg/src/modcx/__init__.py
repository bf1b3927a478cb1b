"""Exact Betti, Ext and Tor complexity computations over artinian local algebras."""

__version__ = "0.1.0"

from .algebra import AlgebraSpec, ArtinAlgebra, build_algebra
from .checks import CheckReport, CheckVerdict, run_full_suite, run_suite
from .fixtures import builtin_ring, catalog_names, random_module
from .growth import GrowthClass, classify, cx_mod, cx_pair, detect_recurrence, px_mod
from .homology import HomologyTable, bass_numbers, ext_table, tor_table
from .modules import ModulePresentation, ModuleRep, free_module, injective_hull, matlis_dual, realize, residue_field
from .resolution import FreeResolution, betti, minimal_free_resolution, syzygy, verify_resolution

__all__ = [
    "AlgebraSpec",
    "ArtinAlgebra",
    "CheckReport",
    "CheckVerdict",
    "FreeResolution",
    "GrowthClass",
    "HomologyTable",
    "ModulePresentation",
    "ModuleRep",
    "bass_numbers",
    "betti",
    "build_algebra",
    "builtin_ring",
    "catalog_names",
    "classify",
    "cx_mod",
    "cx_pair",
    "detect_recurrence",
    "ext_table",
    "free_module",
    "injective_hull",
    "matlis_dual",
    "minimal_free_resolution",
    "px_mod",
    "random_module",
    "realize",
    "residue_field",
    "run_full_suite",
    "run_suite",
    "syzygy",
    "tor_table",
    "verify_resolution",
]

"""Finite-model computations of normalizers and centralizers.

The models are finite groups with their split extensions, groups carrying a
monoid action, and finite topological groups.  Every universal property is
certified by exhaustive search over a bounded catalog.
"""

from . import catalog, centrality, finalg, mset, ptcat, topgrp
from ._kernels import BACKEND
from .catalog import build_catalog, builtin_groups, group_by_name
from .centrality import (
    centralizer_mono,
    distinctive_relation,
    faithful_cover,
    is_eccentric,
    is_faithful,
    smith_centralizer,
)
from .errors import NormcatError
from .finalg import Congruence, FiniteGroup, GroupHom, Subgroup, validate_group
from .mset import internal_normalizer
from .normalizer import k_cartesian_lift, normalizer
from .ptcat import Point, SplitExtension, is_K_cartesian, is_P_cartesian
from .topgrp import is_normal_topsub, top_normalizer

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Congruence",
    "FiniteGroup",
    "GroupHom",
    "NormcatError",
    "Point",
    "SplitExtension",
    "Subgroup",
    "build_catalog",
    "builtin_groups",
    "catalog",
    "centrality",
    "centralizer_mono",
    "distinctive_relation",
    "faithful_cover",
    "finalg",
    "group_by_name",
    "internal_normalizer",
    "is_K_cartesian",
    "is_P_cartesian",
    "is_eccentric",
    "is_faithful",
    "is_normal_topsub",
    "k_cartesian_lift",
    "mset",
    "normalizer",
    "ptcat",
    "smith_centralizer",
    "top_normalizer",
    "topgrp",
    "validate_group",
]

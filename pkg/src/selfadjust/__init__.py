"""Minimally self-adjusting binary search trees with per-access potential audits."""

from .bst import (
    AccessRecord,
    BeforePath,
    TreeArena,
    TreeError,
    access,
    apply_restructure,
    build_tree,
    search_path,
    validate_bst,
)
from .transformers import TRANSFORMERS, get_transformer

__version__ = "0.1.0"

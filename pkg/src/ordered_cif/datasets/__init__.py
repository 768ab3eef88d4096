"""Bundled example data.

``hoel1972.csv`` holds the RFM mouse mortality data of Hoel (1972): 82
germ-free and 99 conventional-environment male mice, with cause 1 =
thymic lymphoma, cause 2 = reticulum cell sarcoma, and deaths from all
other causes coded 0 (treated as censoring).
"""

from importlib import resources

from ..data import MultiGroupDataset, ingest_csv

HOEL_RESOURCE = "hoel1972.csv"


def hoel_path():
    """Filesystem path of the bundled CSV (context-managed by importlib)."""
    return resources.files(__package__).joinpath(HOEL_RESOURCE)


def load_hoel(order=("germfree", "conventional")) -> MultiGroupDataset:
    """The mouse data with a hypothesized lymphoma-incidence order.

    The default order puts the germ-free group first, encoding the
    hypothesis that a germ-free environment lowers lymphoma incidence.
    The observed curves run mostly the other way; reversing the order
    tests the opposite direction.
    """
    payload = hoel_path().read_text(encoding="utf-8")
    return ingest_csv(payload, order)

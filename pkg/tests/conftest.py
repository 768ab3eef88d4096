"""Shared builders for the test suite.

Random data used by oracle-style checks is generated here with plain
numpy calls so the checks do not depend on the package's own simulation
helpers.
"""

import numpy as np
import pytest

from ordered_cif import FailureRecord, GroupSample, MultiGroupDataset


def make_group(label, pairs):
    """Build a group from (time, cause) pairs."""
    return GroupSample(label, tuple(FailureRecord(t, c) for t, c in pairs))


def make_dataset(*groups):
    return MultiGroupDataset(tuple(make_group(lab, pairs) for lab, pairs in groups))


def random_group(rng, n, label="g", censor=0.0, cause1=0.6):
    """Competing-risks sample with exponential times and iid cause labels.

    censor is the marginal probability of cause 0; among failures the
    cause-1 share is cause1.
    """
    times = rng.exponential(1.0, size=n)
    u = rng.random(n)
    causes = np.where(u < censor, 0, np.where(u < censor + (1 - censor) * cause1, 1, 2))
    return make_group(label, zip(times.tolist(), causes.tolist()))


def random_dataset(rng, sizes, censor=0.0, cause1=0.6):
    groups = []
    for i, n in enumerate(sizes):
        groups.append(random_group(rng, n, label=f"g{i + 1}", censor=censor, cause1=cause1))
    return MultiGroupDataset(tuple(groups))


@pytest.fixture
def rng():
    return np.random.default_rng(20260823)

"""Shared fixtures: small reference groups and the session-wide catalog.

The catalog to order 128 (and the 3-groups to 243) are built once per
session; automorphism sets are cached on the group objects, so the survey,
threshold, and structure sweeps share that work.
"""

from __future__ import annotations

import numpy as np
import pytest

from grouptwist import (
    build_from_permutation_generators,
    build_from_table,
    enumerate_catalog,
    generate_family,
)


def cyclic_table(m):
    return (np.add.outer(np.arange(m), np.arange(m)) % m).tolist()


@pytest.fixture(scope="session")
def trivial():
    return build_from_table([[0]], name="1")


@pytest.fixture(scope="session")
def c2():
    return build_from_table(cyclic_table(2), name="C2")


@pytest.fixture(scope="session")
def c3():
    return build_from_table(cyclic_table(3), name="C3")


@pytest.fixture(scope="session")
def c4():
    return build_from_table(cyclic_table(4), name="C4")


@pytest.fixture(scope="session")
def c5():
    return build_from_table(cyclic_table(5), name="C5")


@pytest.fixture(scope="session")
def c6():
    return build_from_table(cyclic_table(6), name="C6")


@pytest.fixture(scope="session")
def s3():
    return build_from_permutation_generators([[1, 0, 2], [1, 2, 0]], name="S3")


@pytest.fixture(scope="session")
def s4():
    return build_from_permutation_generators([[1, 0, 2, 3], [1, 2, 3, 0]], name="S4")


@pytest.fixture(scope="session")
def a5():
    # the 3-cycles (0 1 2) and (2 3 4) generate A5
    return build_from_permutation_generators(
        [[1, 2, 0, 3, 4], [0, 1, 3, 4, 2]], name="A5")


@pytest.fixture(scope="session")
def d8():
    return generate_family("dihedral(4)")


@pytest.fixture(scope="session")
def q8():
    return generate_family("dicyclic(2)")


@pytest.fixture(scope="session")
def c3xc3():
    return generate_family("abelian(3,3)")


@pytest.fixture(scope="session")
def heis3():
    return generate_family("extraspecial(3,exponent_p)")


@pytest.fixture(scope="session")
def catalog128():
    return list(enumerate_catalog(128))


@pytest.fixture(scope="session")
def catalog64(catalog128):
    return [e for e in catalog128 if e.group.order <= 64]


@pytest.fixture(scope="session")
def catalog48(catalog128):
    return [e for e in catalog128 if e.group.order <= 48]


@pytest.fixture(scope="session")
def catalog24(catalog128):
    return [e for e in catalog128 if e.group.order <= 24]


@pytest.fixture(scope="session")
def catalog243p3():
    return list(enumerate_catalog(243, p_group=3))


@pytest.fixture(scope="session")
def threshold_entries(catalog128, catalog243p3):
    """Catalog to order 100 plus the 3-groups to 243, deduplicated."""
    entries = [e for e in catalog128 if e.group.order <= 100]
    seen = {e.fingerprint for e in entries}
    for e in catalog243p3:
        if e.group.order > 100 and e.fingerprint not in seen:
            entries.append(e)
            seen.add(e.fingerprint)
    entries.sort(key=lambda e: (e.group.order, e.fingerprint.sort_key, str(e.spec)))
    return entries


@pytest.fixture(scope="session")
def shared_reports():
    """Cross-test cache for expensive acceptance runs (criteria 2, 3, 9)."""
    return {}

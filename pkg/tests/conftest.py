import random

import pytest

from crdiam.ffield import Field
from crdiam.pipeline import Workspace
from crdiam.polyring import PolyRing

CORPUS_WINDOW = (-10, 10)
PER_RING = 10

RING_RECIPES = [
    # (tag, p, defining generators, positive-degree staircase monomials)
    ("f2_xx_yy", 2, ["x^2", "y^2"], [(1, 0), (0, 1), (1, 1)]),
    ("f3_xx_yyy", 3, ["x^2", "y^3"], [(1, 0), (0, 1), (0, 2), (1, 1), (1, 2)]),
]


def _random_workspace(rng, tag, p, defining, monos, index):
    field = Field(p)
    ctx = PolyRing(field, 2)
    defs = [ctx.parse(s) for s in defining]
    b = rng.randrange(1, 3)
    a = rng.randrange(1, 4)
    rows = []
    for _ in range(b):
        row = []
        for _ in range(a):
            poly = {}
            for m in monos:
                if rng.random() < 0.45:
                    poly[m] = rng.randrange(1, p)
            row.append(poly)
        rows.append(row)
    return Workspace(
        p, 2, defs, rows, CORPUS_WINDOW, label=f"{tag}#{index}", max_period=4
    )


def build_corpus():
    """20 random nondegenerate modules, 10 over each ring, reproducible."""
    rng = random.Random(20260810)
    out = []
    for tag, p, defining, monos in RING_RECIPES:
        accepted = 0
        while accepted < PER_RING:
            ws = _random_workspace(rng, tag, p, defining, monos, accepted)
            try:
                built = ws.built(1)
            except Exception:
                continue
            if built.bundle.complex.is_zero():
                continue
            if built.bundle.free_rank_split != 0:
                continue
            out.append(ws)
            accepted += 1
    return out


@pytest.fixture(scope="session")
def corpus():
    return build_corpus()


@pytest.fixture(scope="session")
def k_codim2_workspace():
    """The residue field over GF(2)[x,y]/(x^2,y^2) on the window [-8, 8]."""
    field = Field(2)
    ctx = PolyRing(field, 2)
    return Workspace(
        2,
        2,
        [ctx.parse("x^2"), ctx.parse("y^2")],
        [[ctx.parse("x"), ctx.parse("y")]],
        (-8, 8),
        label="k/(x^2,y^2)",
    )

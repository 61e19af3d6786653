"""Shared fixtures: the 4-row motivating table and random tiny instances."""

import random

import pytest

from ddmine.distance import AttributeSpec, DistanceSchema

# tid | Age Edu Sex Sal   (Edu: 3=Bachelors 4=Masters 5=PhD)
TABLE1_COLUMNS = [
    [20, 20, 20, 25],  # Age
    [3, 3, 4, 5],      # Edu
    [0, 1, 0, 1],      # Sex
    [3, 3, 4, 5],      # Sal
]
TABLE1_NAMES = ["Age", "Edu", "Sex", "Sal"]
AGE, EDU, SEX, SAL = range(4)


@pytest.fixture
def table1():
    specs = [AttributeSpec(name=n, kind="numeric") for n in TABLE1_NAMES]
    schema = DistanceSchema.build(specs, TABLE1_COLUMNS)
    return TABLE1_COLUMNS, schema


def random_tiny_instance(rng: random.Random, max_tuples: int = 8, max_attrs: int = 4):
    """Random small table within the brute-force oracle's guard: numeric and
    boolean columns with at most 3 base intervals each."""
    n = rng.randint(2, max_tuples)
    m = rng.randint(2, max_attrs)
    cols, specs = [], []
    for a in range(m):
        if rng.random() < 0.25:
            cols.append([rng.choice(["x", "y"]) for _ in range(n)])
            specs.append(AttributeSpec(name=f"A{a}", kind="boolean"))
        else:
            g = rng.choice([1, 1, 2])
            hi = 2 if g == 1 else 3
            cols.append([rng.randint(0, hi) for _ in range(n)])
            ur = None if rng.random() < 0.7 else max(0, hi - 1)
            specs.append(
                AttributeSpec(name=f"A{a}", kind="numeric", granularity=g, ur=ur)
            )
    return cols, DistanceSchema.build(specs, cols)

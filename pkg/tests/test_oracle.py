import pytest

from ddmine.datamodel import DifferentialDependency, DifferentialFunction, Interval
from ddmine.distance import AttributeSpec, DistanceSchema
from ddmine.lattice import DiscoveryConfig
from ddmine.oracle import discover_brute, verify_dd


def iv(lo, hi):
    return Interval(lo, hi)


def dd(lhs, rhs_attr, rhs_interval):
    return DifferentialDependency(
        lhs=DifferentialFunction.of(dict(lhs)), rhs_attr=rhs_attr, rhs_interval=rhs_interval
    )


class TestVerify:
    def test_table1_motivating(self, table1):
        cols, schema = table1
        assert verify_dd(cols, schema, dd([(0, iv(0, 0))], 3, iv(0, 1)), 1.0)
        assert not verify_dd(cols, schema, dd([(0, iv(0, 0))], 3, iv(0, 0)), 1.0)

    def test_full_range_rhs_always_true(self, table1):
        cols, schema = table1
        for b in range(1, 4):
            full = iv(0, schema.maxd[b])
            assert verify_dd(cols, schema, dd([(0, iv(0, 0))], b, full), 1.0)

    def test_epsilon_trims_outlier(self):
        # nine pairs at distance 0, one at distance 2 on the rhs attribute
        specs = [AttributeSpec(name="a", kind="numeric"), AttributeSpec(name="b", kind="numeric")]
        cols = [[0, 0, 0, 0, 0], [0, 0, 0, 0, 2]]
        schema = DistanceSchema.build(specs, cols)
        the_dd = dd([(0, iv(0, 0))], 1, iv(0, 0))
        assert not verify_dd(cols, schema, the_dd, epsilon=1.0)
        # 4 of 10 pairs touch the far value; 0.6 keeps only the near ones
        assert verify_dd(cols, schema, the_dd, epsilon=0.6)

    def test_empty_lhs_vacuous(self, table1):
        cols, schema = table1
        assert verify_dd(cols, schema, dd([(0, iv(3, 3))], 3, iv(0, 0)), 1.0)


class TestBrute:
    def test_table1(self, table1):
        cols, schema = table1
        res = discover_brute(cols, schema, DiscoveryConfig())
        keys = {d.key() for d in res.dd_set}
        assert (((0, iv(0, 0)),), 3, iv(0, 1)) in keys
        assert (((0, iv(0, 0)),), 3, iv(0, 0)) not in keys

    def test_single_attribute_no_dds(self):
        specs = [AttributeSpec(name="a", kind="numeric")]
        schema = DistanceSchema.build(specs, [[0, 1, 2]])
        with pytest.raises(ValueError):
            discover_brute([[0, 1, 2]], schema, DiscoveryConfig())

    def test_size_guard(self):
        specs = [AttributeSpec(name=n, kind="numeric") for n in ("a", "b")]
        cols = [list(range(13)), list(range(13))]
        schema = DistanceSchema.build(specs, cols)
        with pytest.raises(ValueError):
            discover_brute(cols, schema, DiscoveryConfig())

    def test_every_result_verifies(self, table1):
        cols, schema = table1
        for eps in (1.0, 0.9):
            res = discover_brute(cols, schema, DiscoveryConfig(epsilon=eps))
            for d in res.dd_set:
                assert verify_dd(cols, schema, d, epsilon=eps)

import math

import numpy as np
import pytest

from dynnets.linalg import haar_unitary, operator_norm
from dynnets.unitary_nets import (
    ImplicitGridNet,
    UnitaryNet,
    build_unitary_net,
    circle_covering_number,
    empirical_covering_check,
    empirical_packing_lower_bound,
    load_net,
    save_net,
    unitary_covering_bounds,
)


@pytest.fixture(scope="module")
def u2_net():
    return build_unitary_net(2, 0.5)


class TestUnitaryCoveringBounds:
    def test_n2_values(self):
        b = unitary_covering_bounds(2, 0.1)
        assert b.valid
        np.testing.assert_allclose(math.exp(b.lower_log), 7.5 ** 4, rtol=1e-12)
        np.testing.assert_allclose(math.exp(b.upper_log), 2.401e7, rtol=1e-12)

    def test_n1_values(self):
        b = unitary_covering_bounds(1, 0.1)
        np.testing.assert_allclose(math.exp(b.lower_log), 7.5, rtol=1e-12)
        np.testing.assert_allclose(math.exp(b.upper_log), 70.0, rtol=1e-12)

    def test_outside_validity_window(self):
        b = unitary_covering_bounds(2, 0.2)
        assert not b.valid
        assert b.lower_log is None and b.upper_log is None

    def test_lower_below_upper(self):
        for n in (1, 2, 3):
            for eps in (0.01, 0.05, 0.1):
                b = unitary_covering_bounds(n, eps)
                assert b.lower_log < b.upper_log

    def test_rejects_bad_epsilon(self):
        with pytest.raises(ValueError):
            unitary_covering_bounds(2, 0.0)
        with pytest.raises(ValueError):
            unitary_covering_bounds(0, 0.1)


class TestCircleCoveringNumber:
    def test_frozen_values(self):
        assert circle_covering_number(0.02) == 158
        assert circle_covering_number(0.05) == 63
        assert circle_covering_number(0.1) == 32
        assert circle_covering_number(0.5) == 7

    def test_diameter_case(self):
        assert circle_covering_number(2.0) == 1
        assert circle_covering_number(5.0) == 1

    def test_within_log_domain_bounds(self):
        for eps in (0.02, 0.05, 0.1):
            b = unitary_covering_bounds(1, eps)
            count = circle_covering_number(eps)
            assert math.exp(b.lower_log) <= count <= math.exp(b.upper_log)


class TestBuildUnitaryNet:
    def test_u1_net_covers_fine_phase_grid(self):
        net = build_unitary_net(1, 0.3)
        phases = np.exp(1j * np.linspace(-np.pi, np.pi, 4001))
        elements = net.matrices[:, 0, 0]
        gaps = np.abs(phases[:, None] - elements[None, :]).min(axis=1)
        assert gaps.max() <= 0.3 + 1e-9

    def test_u2_net_frozen_size(self, u2_net):
        # grid construction is deterministic; size changes flag regressions
        assert len(u2_net) == 23789

    def test_u2_net_construction_log(self, u2_net):
        log = u2_net.construction_log
        assert log["method"] == "lie-algebra-grid"
        assert log["spacing"] == pytest.approx(2 * 0.5 / 2)
        assert log["retained"] == 23789

    def test_u2_nearest_within_epsilon(self, u2_net):
        for seed in range(25):
            u = haar_unitary(2, seed=seed)
            _, dist = u2_net.nearest(u)
            assert dist <= 0.5 + 1e-12

    def test_nearest_returns_closest_element(self, u2_net):
        u = haar_unitary(2, seed=77)
        element, dist = u2_net.nearest(u)
        assert operator_norm(element.array - u.array) == pytest.approx(dist)

    def test_rejects_large_dimension(self):
        with pytest.raises(ValueError):
            build_unitary_net(4, 0.5)

    def test_too_small_epsilon_fails_fast(self):
        with pytest.raises(ValueError, match="net too large"):
            build_unitary_net(2, 0.02)

    def test_u3_fails_projected_count(self):
        # at eps = 0.5 a 9-dimensional grid already projects beyond the cap
        with pytest.raises(ValueError, match="net too large"):
            build_unitary_net(3, 0.5)


class TestUnitaryNetType:
    def test_rejects_nonunitary_element(self):
        bad = np.stack([np.eye(2), np.eye(2) * 1.1]).astype(complex)
        with pytest.raises(ValueError, match="not unitary"):
            UnitaryNet(2, 0.5, bad)

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            UnitaryNet(2, 0.5, np.zeros((0, 2, 2)))

    def test_elements_are_validated_matrices(self):
        net = UnitaryNet(1, 2.0, np.ones((1, 1, 1), dtype=complex))
        assert len(net.elements) == 1
        assert net.elements[0].dim == 1


class TestEmpiricalCoveringCheck:
    def test_single_element_u1_diameter(self):
        net = UnitaryNet(1, 2.0, np.ones((1, 1, 1), dtype=complex))
        max_gap, ok = empirical_covering_check(net, 500, seed=0)
        assert ok
        assert max_gap <= 2.0

    def test_plus_minus_one_at_sqrt2(self):
        mats = np.array([[[1.0]], [[-1.0]]], dtype=complex)
        net = UnitaryNet(1, math.sqrt(2.0), mats)
        max_gap, ok = empirical_covering_check(net, 2000, seed=1)
        assert ok
        # worst phases +-i sit at chordal distance sqrt(2) exactly
        assert max_gap <= math.sqrt(2.0) + 1e-12

    def test_undersized_net_fails(self):
        net = UnitaryNet(2, 0.1, np.eye(2)[None].astype(complex))
        max_gap, ok = empirical_covering_check(net, 200, seed=2)
        assert not ok
        assert max_gap > 0.1

    def test_deterministic_per_seed(self, u2_net):
        gap1, _ = empirical_covering_check(u2_net, 100, seed=5)
        gap2, _ = empirical_covering_check(u2_net, 100, seed=5)
        assert gap1 == gap2


class TestEmpiricalPackingLowerBound:
    def test_diameter_gives_one(self):
        assert empirical_packing_lower_bound(1, 2.0, trials=50, seed=0) == 1
        assert empirical_packing_lower_bound(2, 2.5, trials=50, seed=0) == 1

    def test_u1_three_phases(self):
        count = empirical_packing_lower_bound(1, 1.0, trials=300, seed=3)
        assert count >= 3

    def test_packing_at_double_epsilon_below_net_size(self, u2_net):
        # packing at 2 eps never exceeds the covering count at eps
        count = empirical_packing_lower_bound(2, 1.0, trials=300, seed=4)
        assert count <= len(u2_net)

    def test_packing_below_log_bound(self):
        count = empirical_packing_lower_bound(1, 0.2, trials=300, seed=5)
        upper = math.exp(unitary_covering_bounds(1, 0.1).upper_log)
        assert count <= upper


class TestImplicitGridNet:
    def test_round_within_epsilon(self):
        net = ImplicitGridNet(4, 0.3)
        for seed in range(15):
            u = haar_unitary(4, seed=seed)
            element, dist = net.round(u)
            assert dist <= 0.3 + 1e-12
            assert operator_norm(element.array - u.array) == pytest.approx(dist)

    def test_round_is_idempotent(self):
        net = ImplicitGridNet(4, 0.3)
        element, _ = net.round(haar_unitary(4, seed=99))
        again, dist = net.round(element)
        assert dist <= 1e-9
        np.testing.assert_allclose(again.array, element.array, atol=1e-9)

    def test_identity_rounds_to_identity(self):
        net = ImplicitGridNet(3, 0.4)
        element, dist = net.round(np.eye(3).astype(complex))
        np.testing.assert_allclose(element.array, np.eye(3), atol=1e-12)
        assert dist <= 1e-12


class TestNetSerialization:
    def test_roundtrip(self, tmp_path, u2_net):
        path = tmp_path / "net.bin"
        save_net(u2_net, path)
        loaded = load_net(path)
        assert loaded.n == u2_net.n
        assert loaded.epsilon == u2_net.epsilon
        np.testing.assert_array_equal(loaded.matrices, u2_net.matrices)

    def test_small_net_roundtrip_bytes(self, tmp_path):
        mats = np.array([[[1.0]], [[-1.0]]], dtype=complex)
        net = UnitaryNet(1, 0.9, mats, {"method": "manual"})
        p1 = tmp_path / "a.bin"
        p2 = tmp_path / "b.bin"
        save_net(net, p1)
        save_net(load_net(p1), p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_load_rejects_corrupt_file(self, tmp_path):
        path = tmp_path / "bad.bin"
        path.write_bytes(b"\x00" * 10)
        with pytest.raises(ValueError):
            load_net(path)

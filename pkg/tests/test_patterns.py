import random

import pytest

from archuncert.arch import to_network, validate_architecture
from archuncert.bn import marginal_brute_force
from archuncert.errors import UsageError
from archuncert.patterns import NVersionSpec, apply_n_version, voter_cpt_rows
from helpers import random_architecture


def spec(target="m0", weight=0.9, p_high=0.1, **kwargs):
    return NVersionSpec(target=target, monitor_id="lidar",
                        monitor_p_high=p_high, weight=weight, **kwargs)


def chain_arch(rng_seed=11):
    # random ml architecture with >= 2 components, deterministic
    rng = random.Random(rng_seed)
    while True:
        arch = random_architecture(rng, n_ml_max=4)
        if len(arch.components) >= 2:
            return arch


class TestVoterCpt:
    def test_weighted_vote_rows(self):
        rows = voter_cpt_rows(0.9)
        assert rows == {"H,H": 1.0, "H,L": pytest.approx(0.1, abs=1e-15),
                        "L,H": 0.9, "L,L": 0.0}

    def test_zero_weight_is_identity_on_target(self):
        assert voter_cpt_rows(0.0) == {"H,H": 1.0, "H,L": 1.0,
                                       "L,H": 0.0, "L,L": 0.0}


class TestApplyNVersion:
    def test_structure_delta(self):
        arch = chain_arch()
        target = arch.components[0].id
        outgoing = [e for e in arch.edges if e[0] == target]
        new = apply_n_version(arch, spec(target))
        assert len(new.components) == len(arch.components) + 2
        assert len(new.edges) == len(arch.edges) + 2
        assert all((target, dst) not in new.edges for _, dst in outgoing)
        voter = f"voter_{target}"
        assert (target, voter) in new.edges
        assert ("lidar", voter) in new.edges
        assert validate_architecture(new).ok

    def test_original_unmodified(self):
        arch = chain_arch()
        before = (arch.components, arch.edges, dict(arch.cpts))
        apply_n_version(arch, spec(arch.components[0].id))
        assert (arch.components, arch.edges, dict(arch.cpts)) == before

    def test_unknown_target(self):
        with pytest.raises(UsageError):
            apply_n_version(chain_arch(), spec("ghost"))

    def test_double_application_rejected(self):
        arch = chain_arch()
        target = arch.components[0].id
        once = apply_n_version(arch, spec(target))
        with pytest.raises(UsageError, match="twice"):
            apply_n_version(once, NVersionSpec(target, "lidar2", 0.1, 0.9))

    def test_bad_parameters(self):
        with pytest.raises(UsageError):
            NVersionSpec("m0", "lidar", 0.1, 1.5)
        with pytest.raises(UsageError):
            NVersionSpec("m0", "lidar", -0.1, 0.9)

    def test_voter_marginal_is_weighted_average(self):
        rng = random.Random(5)
        for _ in range(10):
            arch = random_architecture(rng)
            target = arch.components[0].id
            w = rng.random()
            p_mon = rng.random()
            new = apply_n_version(arch, spec(target, weight=w, p_high=p_mon))
            net = to_network(new)
            p_target = marginal_brute_force(net, target)["H"]
            p_voter = marginal_brute_force(net, f"voter_{target}")["H"]
            assert abs(p_voter - (w * p_mon + (1 - w) * p_target)) <= 1e-12

    def test_reference_point_values(self):
        # w=0.9, P(monitor=H)=0.1: target marginal 0 -> 0.09, 0.1 -> 0.10
        from archuncert.arch import AnnotatedArchitecture, Component, \
            UncertaintyAnnotation
        from archuncert.bn import Cpt

        for p_target, expected in ((0.0, 0.09), (0.1, 0.1)):
            arch = AnnotatedArchitecture(
                "unit", (Component("DE", "ml"),), (),
                (UncertaintyAnnotation("SU_DE", "stochastic", ("DE",)),),
                {"SU_DE": Cpt("SU_DE", (), {"": 0.0}),
                 "DE": Cpt("DE", ("SU_DE",),
                           {"L": p_target, "H": p_target})})
            new = apply_n_version(arch, spec("DE", weight=0.9, p_high=0.1))
            net = to_network(new)
            assert abs(marginal_brute_force(net, "voter_DE")["H"]
                       - expected) <= 1e-12

    def test_transparent_voter_with_zero_weight(self):
        rng = random.Random(9)
        for _ in range(5):
            arch = random_architecture(rng)
            target = arch.components[0].id
            downstream = [dst for src, dst in arch.edges if src == target]
            new = apply_n_version(arch, spec(target, weight=0.0))
            net_before = to_network(arch)
            net_after = to_network(new)
            for comp in [c.id for c in arch.components]:
                before = marginal_brute_force(net_before, comp)["H"]
                after = marginal_brute_force(net_after, comp)["H"]
                assert abs(before - after) <= 1e-12, (comp, downstream)

"""Loop censuses, spectral data, and the entropy-maximizing chain,
checked against exact small-instance oracles."""

from __future__ import annotations

import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from henonshift.markov import (
    ConvergenceError,
    CylinderWord,
    LoopCensus,
    MarkovGraph,
    NotStronglyConnectedError,
    build_mme,
    chain_entropy,
    count_loops,
    cycle_graph,
    equidistribution_cylinder,
    full_shift_graph,
    golden_mean_graph,
    graph_from_dict,
    graph_to_dict,
    graph_period,
    gurevich_entropy,
    is_mixing,
    is_spr,
    load_graph,
    perron,
    radii,
    return_time_tail,
    self_loop_graph,
    shift_periodic_census,
    strongly_connected_defect,
)

PHI = (1.0 + math.sqrt(5.0)) / 2.0


# ---------------------------------------------------------------------------
# loop censuses


def test_golden_mean_census_fibonacci():
    census = count_loops(golden_mean_graph(), 10)
    assert census.Z == (1, 2, 3, 5, 8, 13, 21, 34, 55, 89)
    assert census.Zstar == (1, 1, 0, 0, 0, 0, 0, 0, 0, 0)
    assert census.z(0) == 1
    assert all(d == 0 for d in census.renewal_defect())


def test_full_shift_census():
    census = count_loops(full_shift_graph(2), 12)
    # loops AT the base: (M^n)_00 = 2^(n-1)
    assert census.Z == tuple(2 ** (n - 1) for n in range(1, 13))
    # first returns 0 1^(n-1) 0: exactly one loop per length
    assert census.Zstar == tuple(1 for _ in range(12))
    assert all(d == 0 for d in census.renewal_defect())


def test_cycle_census_period_three():
    census = count_loops(cycle_graph(3), 9)
    assert census.Z == (0, 0, 1, 0, 0, 1, 0, 0, 1)
    assert census.Zstar == (0, 0, 1, 0, 0, 0, 0, 0, 0)


def _brute_force_census(graph: MarkovGraph, N: int) -> tuple[list[int], list[int]]:
    """Path enumeration oracle: all walks of length <= N from the base."""
    adj = {u: [v for (x, v) in graph.arrows if x == u] for u in graph.vertices}
    Z = [0] * (N + 1)
    Zstar = [0] * (N + 1)

    def walk(v: str, steps: int, touched_base: bool) -> None:
        if steps > 0 and v == graph.base:
            Z[steps] += 1
            if not touched_base:
                Zstar[steps] += 1
        if steps == N:
            return
        for w in adj[v]:
            walk(w, steps + 1, touched_base or (steps > 0 and v == graph.base))

    walk(graph.base, 0, False)
    return Z[1:], Zstar[1:]


def test_count_loops_matches_enumeration_golden():
    g = golden_mean_graph()
    census = count_loops(g, 12)
    Z, Zstar = _brute_force_census(g, 12)
    assert list(census.Z) == Z
    assert list(census.Zstar) == Zstar


def test_census_validates_zstar_bounded_by_z():
    with pytest.raises(ValueError):
        LoopCensus(base="e", horizon=2, Z=(1, 1), Zstar=(2, 0))


# ---------------------------------------------------------------------------
# radii and SPR


def test_golden_mean_radii_and_spr():
    census = count_loops(golden_mean_graph(), 64)
    r = radii(census)
    assert abs(r.R - 1.0 / PHI) < 1e-2
    assert math.isinf(r.R_star)  # finite first-return support
    report = is_spr(census, margin=0.05)
    assert report.spr and not report.degenerate


def test_spr_margin_can_flip_verdict():
    census = count_loops(full_shift_graph(2), 64)
    r = radii(census)
    assert abs(r.R - 0.5) < 1e-2
    assert abs(r.R_star - 1.0) < 1e-2
    assert is_spr(census, margin=0.05).spr
    assert not is_spr(census, margin=0.7).spr


def test_short_horizon_warns():
    census = count_loops(golden_mean_graph(), 10)
    report = is_spr(census)
    assert any("horizon" in w for w in report.warnings)


# ---------------------------------------------------------------------------
# structure predicates


def test_strong_connectivity_defect_names_pair():
    g = MarkovGraph(
        vertices=("a", "b"), arrows=frozenset({("a", "b")}), base="a"
    )
    defect = strongly_connected_defect(g)
    assert defect is not None
    with pytest.raises(NotStronglyConnectedError):
        perron(g)


def test_period_and_mixing():
    assert graph_period(cycle_graph(4)) == 4
    assert not is_mixing(cycle_graph(4))
    assert graph_period(golden_mean_graph()) == 1
    assert is_mixing(golden_mean_graph())


# ---------------------------------------------------------------------------
# spectral data and the chain


def test_golden_mean_entropy():
    assert abs(gurevich_entropy(golden_mean_graph()) - math.log(PHI)) < 1e-12


def test_perron_matches_dense_eigensolver_on_samples():
    rng = np.random.default_rng(5)
    for _ in range(25):
        n = int(rng.integers(2, 7))
        A = (rng.random((n, n)) < 0.5).astype(int)
        A[np.arange(n), (np.arange(n) + 1) % n] = 1  # force a covering cycle
        g = MarkovGraph(
            vertices=tuple(f"v{i}" for i in range(n)),
            arrows=frozenset(
                (f"v{i}", f"v{j}") for i in range(n) for j in range(n) if A[i, j]
            ),
            base="v0",
        )
        spec = perron(g)
        lam_oracle = max(abs(np.linalg.eigvals(A.astype(float))))
        assert abs(spec.lam - lam_oracle) < 1e-8 * max(1.0, lam_oracle)


def test_perron_handles_periodic_graph():
    spec = perron(cycle_graph(5))
    assert abs(spec.lam - 1.0) < 1e-10


def test_mme_stationarity_and_entropy():
    g = golden_mean_graph()
    spec = perron(g)
    chain = build_mme(spec, g)
    pi = np.array(chain.pi)
    P = np.array(chain.p)
    assert np.all(P >= 0)
    assert np.max(np.abs(P.sum(axis=1) - 1.0)) < 1e-12
    assert np.max(np.abs(pi @ P - pi)) < 1e-10
    assert abs(chain_entropy(chain) - chain.h_top) < 1e-9


def test_mme_uniform_on_full_shift():
    g = full_shift_graph(3)
    chain = build_mme(perron(g), g)
    assert np.allclose(chain.p, 1.0 / 3.0, atol=1e-12)
    assert np.allclose(chain.pi, 1.0 / 3.0, atol=1e-10)
    assert abs(chain.h_top - math.log(3.0)) < 1e-12


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 5), st.integers(0, 10**6))
def test_mme_is_stationary_on_random_graphs(n, seed):
    rng = np.random.default_rng(seed)
    A = (rng.random((n, n)) < 0.6).astype(int)
    A[np.arange(n), (np.arange(n) + 1) % n] = 1
    g = MarkovGraph(
        vertices=tuple(f"v{i}" for i in range(n)),
        arrows=frozenset(
            (f"v{i}", f"v{j}") for i in range(n) for j in range(n) if A[i, j]
        ),
        base="v0",
    )
    chain = build_mme(perron(g), g)
    pi = np.array(chain.pi)
    P = np.array(chain.p)
    assert np.max(np.abs(pi @ P - pi)) < 1e-8
    assert np.max(np.abs(P.sum(axis=1) - 1.0)) < 1e-10


# ---------------------------------------------------------------------------
# periodic censuses of the shift


def test_shift_fix_counts():
    g = golden_mean_graph()
    assert shift_periodic_census(g, 10) == 123  # trace of the 10th power
    g2 = full_shift_graph(2)
    assert all(shift_periodic_census(g2, p) == 2**p for p in range(1, 21))


def test_cylinder_equidistribution_golden():
    g = golden_mean_graph()
    chain = build_mme(perron(g), g)
    comp = equidistribution_cylinder(g, 10, CylinderWord(("0", "0")), chain)
    assert abs(comp.empirical - 55.0 / 123.0) < 1e-12
    assert abs(comp.mme - chain.pi_of("0") / PHI) < 1e-10
    assert abs(comp.empirical - comp.mme) < 0.01


def test_cylinder_convergence_in_p():
    g = golden_mean_graph()
    chain = build_mme(perron(g), g)
    cyl = CylinderWord(("0", "1"))
    diffs = [
        abs(
            equidistribution_cylinder(g, p, cyl, chain).empirical
            - equidistribution_cylinder(g, p, cyl, chain).mme
        )
        for p in (6, 12, 24)
    ]
    assert diffs[2] < diffs[0]


def test_missing_arrow_cylinder_has_zero_mass():
    g = golden_mean_graph()
    chain = build_mme(perron(g), g)
    comp = equidistribution_cylinder(g, 8, CylinderWord(("1", "1")), chain)
    assert comp.empirical == 0.0 and comp.mme == 0.0


# ---------------------------------------------------------------------------
# i/o and misc


def test_graph_json_roundtrip(tmp_path):
    g = golden_mean_graph()
    data = graph_to_dict(g)
    assert graph_from_dict(data) == g
    path = tmp_path / "g.json"
    path.write_text(json.dumps(data))
    assert load_graph(str(path)) == g


def test_load_graph_malformed_raises_with_position(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"vertices": [}')
    with pytest.raises(json.JSONDecodeError) as err:
        load_graph(str(path))
    assert err.value.lineno == 1


def test_return_time_tail_golden():
    g = golden_mean_graph()
    census = count_loops(g, 20)
    chain = build_mme(perron(g), g)
    # pi_e Z*_n e^{-n h}: n=1 -> pi_e / phi, n >= 3 -> 0
    assert abs(return_time_tail(chain, census, 1) - chain.pi_of("0") / PHI) < 1e-10
    assert return_time_tail(chain, census, 5) == 0.0


def test_self_loop_degenerate():
    census = count_loops(self_loop_graph(), 12)
    assert census.Z == tuple(1 for _ in range(12))
    assert gurevich_entropy(self_loop_graph()) == pytest.approx(0.0, abs=1e-12)

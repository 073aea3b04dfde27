"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Statistical criteria use the fixed base seeds below. Criteria 3 and 5 also
persist their run records as CSVs under results/acceptance/ so the figure
scripts can consume real data.
"""

import os

import pytest
from numpy.random import Generator, PCG64

from fireflysync.engine import init_state, simulate, _spawn_streams
from fireflysync.graphs import (check_topology, complete_topology, from_edges,
                                generate_geometric, generate_k_regular)
from fireflysync.harness import SweepSpec, replay_manifest, run_sweep
from fireflysync.metrics import max_amplitude, success_fraction
from fireflysync.model import ModelParams

from reference import reference_simulate

BASE_SEED = 20250824
RESULTS_DIR = os.path.join(os.path.dirname(os.path.dirname(__file__)),
                           "results", "acceptance")


def report(criterion, passed, detail):
    line = f"ACCEPTANCE {criterion}: {'PASS' if passed else 'FAIL'} — {detail}"
    print(line)
    return passed


def ring_topology(n):
    edges = sorted({tuple(sorted((i, (i + 1) % n))) for i in range(n)})
    return from_edges(n, edges, ("regular", 2))


class TestCriterion1OracleEquivalence:
    """Engine clock trajectories exactly match the naive reference simulator."""

    @pytest.mark.parametrize("sigma", [0.0, 0.3])
    def test_exact_match(self, sigma):
        mismatches = 0
        total = 0
        for n in range(2, 9):
            for topo_name in ("complete", "ring"):
                topo = complete_topology(n) if topo_name == "complete" else ring_topology(n)
                for seed_idx in range(50):
                    seed = BASE_SEED + 1000 * seed_idx + n
                    p = ModelParams(n_agents=n, cycle_len=10, horizon=100,
                                    quorum_threshold=0.5, flash_fraction=0.5,
                                    noise_level=sigma)
                    traj = simulate(p, topo, seed, snapshot_interval=1)
                    init = init_state(p, seed).clocks
                    _, _, noise_ss = _spawn_streams(seed)
                    ref_clocks, _ = reference_simulate(
                        n, 10, 100, 0.5, 0.5, sigma,
                        [list(nb) for nb in topo.neighbor_lists], list(init),
                        noise_rng=Generator(PCG64(noise_ss)),
                    )
                    total += 1
                    engine_clocks = [list(traj.snapshots[t + 1]) for t in range(100)]
                    if engine_clocks != ref_clocks:
                        mismatches += 1
        ok = report(f"1 (sigma={sigma})", mismatches == 0,
                    f"{total - mismatches}/{total} trajectories exactly equal")
        assert ok


class TestCriterion2SymmetricLock:
    """Two half-blocks offset by half a cycle stay locked at A_max = 0.5."""

    def test_lock_exact(self):
        p = ModelParams(n_agents=100, cycle_len=10, horizon=1000)
        topo = complete_topology(100)
        clocks = [0] * 50 + [5] * 50
        amaxes = [max_amplitude(simulate(p, topo, BASE_SEED + s, init_clocks=clocks))
                  for s in range(5)]
        ok = report(2, all(a == 0.5 for a in amaxes),
                    f"A_max values {sorted(set(amaxes))} (expected exactly 0.5)")
        assert ok


@pytest.fixture(scope="module")
def noise_sweep_records(tmp_path_factory):
    """200 runs per sigma in {0, 0.3, 0.7}: N=100, C=10, T=1e4, complete graph."""
    spec = SweepSpec(
        name="criterion3",
        n_agents=(100,), cycle_len=(10,), horizon=10_000,
        theta=(0.5,), flash_fraction=(0.5,),
        noise_sigma=(0.0, 0.3, 0.7),
        topology="complete", connectivity=(0.0,),
        repetitions=200, base_seed=BASE_SEED + 3,
    )
    os.makedirs(RESULTS_DIR, exist_ok=True)
    records = run_sweep(spec, RESULTS_DIR)
    by_sigma = {}
    for rec in records:
        by_sigma.setdefault(rec.params.noise_level, []).append(rec)
    return by_sigma


class TestCriterion3NoiseRescuesSync:
    def test_noise_rescue(self, noise_sweep_records):
        p0, hw0 = success_fraction(noise_sweep_records[0.0])
        p3, hw3 = success_fraction(noise_sweep_records[0.3])
        diff = p3 - p0
        passed = diff > 0.2 and diff > hw0 + hw3
        ok = report(3, passed,
                    f"sigma=0: {p0:.3f}±{hw0:.3f}, sigma=0.3: {p3:.3f}±{hw3:.3f}, "
                    f"diff {diff:+.3f} (required > 0.2 and > {hw0 + hw3:.3f})")
        assert ok


class TestCriterion4ExcessNoiseDestroysSync:
    def test_high_noise(self, noise_sweep_records):
        p7, hw7 = success_fraction(noise_sweep_records[0.7])
        ok = report(4, p7 < 0.05, f"sigma=0.7: success_fraction {p7:.3f}±{hw7:.3f} (required < 0.05)")
        assert ok


class TestCriterion5OffDiagonalFailure:
    def test_short_flash_never_syncs(self):
        spec = SweepSpec(
            name="criterion5",
            n_agents=(100,), cycle_len=(10,), horizon=1000,
            theta=(0.9,), flash_fraction=(0.2,),
            noise_sigma=(0.0,),
            topology="geometric", connectivity=(0.3, 0.6, 1.0),
            repetitions=100, base_seed=BASE_SEED + 5,
        )
        os.makedirs(RESULTS_DIR, exist_ok=True)
        records = run_sweep(spec, RESULTS_DIR)
        by_r = {}
        for rec in records:
            by_r.setdefault(rec.k_or_r, []).append(rec)
        fractions = {r: success_fraction(group)[0] for r, group in sorted(by_r.items())}
        ok = report(5, all(p == 0.0 for p in fractions.values()),
                    f"success per r: {fractions} (required 0 in every cell)")
        assert ok


class TestCriterion6FragmentationFailure:
    def test_sparse_geometric(self):
        p = ModelParams(n_agents=100, cycle_len=10, horizon=1000)
        successes = 0
        multi_component = 0
        runs = 100
        for i in range(runs):
            topo = generate_geometric(100, 0.05, BASE_SEED + 6000 + i)
            if check_topology(topo).component_count > 1:
                multi_component += 1
            if max_amplitude(simulate(p, topo, BASE_SEED + 6000 + i)) >= 0.85:
                successes += 1
        frac = successes / runs
        passed = frac < 0.05 and multi_component > runs / 2
        ok = report(6, passed,
                    f"success_fraction {frac:.3f} (required < 0.05), "
                    f"multi-component graphs {multi_component}/{runs} (required majority)")
        assert ok


class TestCriterion7LinkRemovalRescuesSync:
    def test_removal_beats_full_connectivity(self):
        spec = SweepSpec(
            name="criterion7",
            n_agents=(100,), cycle_len=(30,), horizon=10_000,
            theta=(0.5,), flash_fraction=(0.5,),
            noise_sigma=(0.0,),
            topology="regular", connectivity=(0.0, 0.5), removal_mode=True,
            repetitions=200, base_seed=BASE_SEED + 7,
        )
        os.makedirs(RESULTS_DIR, exist_ok=True)
        records = run_sweep(spec, RESULTS_DIR)
        by_k = {}
        for rec in records:
            by_k.setdefault(int(rec.k_or_r), []).append(rec)
        p99, hw99 = success_fraction(by_k[99])
        p49, hw49 = success_fraction(by_k[49])
        diff = p49 - p99
        passed = diff > hw99 + hw49
        ok = report(7, passed,
                    f"k=99: {p99:.3f}±{hw99:.3f}, k=49: {p49:.3f}±{hw49:.3f}, "
                    f"diff {diff:+.3f} (required > {hw99 + hw49:.3f})")
        assert ok


class TestCriterion8ParityComparison:
    def test_parity_table_produced(self):
        spec = SweepSpec(
            name="criterion8_parity",
            n_agents=(100,), cycle_len=(10,), horizon=10_000,
            theta=(0.5,), flash_fraction=(0.5,),
            noise_sigma=(0.0,),
            topology="regular", connectivity=(19.0, 20.0),
            repetitions=100, base_seed=BASE_SEED + 8,
        )
        os.makedirs(RESULTS_DIR, exist_ok=True)
        records = run_sweep(spec, RESULTS_DIR)
        by_k = {}
        for rec in records:
            by_k.setdefault(int(rec.k_or_r), []).append(rec)
        p19, hw19 = success_fraction(by_k[19])
        p20, hw20 = success_fraction(by_k[20])
        print("  parity comparison:")
        print(f"    k=19 (odd):  success_fraction {p19:.3f} ± {hw19:.3f}")
        print(f"    k=20 (even): success_fraction {p20:.3f} ± {hw20:.3f}")
        direction = "even > odd" if p20 > p19 else ("even < odd" if p20 < p19 else "tie")
        # exploratory expectation (not a gate): even k syncs more readily
        ok = report(8, True, f"comparison table produced; observed direction: {direction}")
        assert ok


class TestCriterion9GraphGeneratorProperties:
    def test_all_samples_valid(self):
        failures = []
        for k in (4, 6, 10, 19, 20, 99):
            for i in range(100):
                topo = generate_k_regular(100, k, BASE_SEED + 9000 + 100 * k + i)
                rep = check_topology(topo)
                if not (rep.ok and rep.degree_histogram == {k: 100}
                        and rep.component_count == 1):
                    failures.append((k, i))
        parity_raised = False
        try:
            generate_k_regular(5, 3, 0)
        except ValueError:
            parity_raised = True
        passed = not failures and parity_raised
        ok = report(9, passed,
                    f"600/600 samples valid ({len(failures)} failures); "
                    f"parity error raised: {parity_raised}")
        assert ok


class TestCriterion10DeterminismAndReplay:
    def test_manifest_replay_byte_identical(self, tmp_path):
        spec = SweepSpec(
            name="criterion10",
            n_agents=(50,), cycle_len=(10,), horizon=500,
            theta=(0.5,), flash_fraction=(0.5,),
            noise_sigma=(0.0, 0.3),
            topology="regular", connectivity=(9.0,),
            repetitions=5, base_seed=BASE_SEED + 10,
        )
        run_sweep(spec, tmp_path / "orig")
        replay_manifest(tmp_path / "orig" / "criterion10.manifest.json",
                        tmp_path / "replay")

        def seed_sorted(path):
            lines = path.read_text().splitlines()
            return [lines[0]] + sorted(lines[1:], key=lambda r: int(r.split(",")[0]))

        orig = seed_sorted(tmp_path / "orig" / "criterion10.csv")
        replay = seed_sorted(tmp_path / "replay" / "criterion10.csv")
        ok = report(10, orig == replay,
                    f"seed-sorted CSVs byte-identical over {len(orig) - 1} rows")
        assert ok

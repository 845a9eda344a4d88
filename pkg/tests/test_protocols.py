import numpy as np
import pytest

from kantian_solve import (DomainError, Game, InvalidProfileError, JointDistribution, WelfareKind, catalog,
                           expected_utility, pareto_optimal_profiles, run_anticoord_protocol, run_bos_protocol,
                           run_choose_winner, solve_welfare, verify_candidate)

from conftest import load_game


def labels(game, dist):
    return sorted(("".join(game.profile_names(p)), w) for p, w in dist.support)


def test_bos_protocol_exact():
    g = load_game("roemer_bos.json")
    run = run_bos_protocol(g, seed=1)
    assert labels(g, run.exact_distribution) == [("BB", 0.5), ("SS", 0.5)]
    assert run.exact_utilities.tolist() == [2.5, 2.5]
    assert run.empirical_means is None


def test_anticoord_protocol_exact():
    g = load_game("anticoordination.json")
    run = run_anticoord_protocol(g)
    assert labels(g, run.exact_distribution) == [("CS", 0.5), ("SC", 0.5)]
    assert run.exact_utilities.tolist() == [150, 150]


def test_wrong_action_sets():
    with pytest.raises(InvalidProfileError):
        run_bos_protocol(load_game("pd.json"))
    with pytest.raises(InvalidProfileError):
        run_anticoord_protocol(load_game("roemer_bos.json"))


@pytest.mark.parametrize("runner,name", [(run_bos_protocol, "roemer_bos.json"),
                                         (run_anticoord_protocol, "anticoordination.json")])
def test_bit_protocols_sampling(runner, name):
    g = load_game(name)
    a = runner(g, seed=7, trials=100_000)
    b = runner(g, seed=7, trials=100_000)
    assert np.array_equal(a.empirical_means, b.empirical_means)
    assert np.all(np.abs(a.empirical_means - a.exact_utilities) <= 5 * a.standard_errors)
    c = runner(g, seed=8, trials=100_000)
    assert not np.array_equal(a.empirical_means, c.empirical_means)


def test_choose_winner_exact():
    run = run_choose_winner(20)
    assert np.allclose(run.exact_utilities, 0.05, atol=1e-12)
    assert len(run.exact_distribution.support) == 20
    for prof, _ in run.exact_distribution.support:
        assert list(prof).count(0) == 1
    solo = run_choose_winner(1, trials=10)
    assert solo.exact_utilities.tolist() == [1.0] and solo.empirical_means.tolist() == [1.0]
    with pytest.raises(DomainError):
        run_choose_winner(0)


def test_choose_winner_sampling():
    run = run_choose_winner(20, seed=3, trials=120_000, chunk=25_000)
    assert run.extra["exactly_one_submitter"]
    assert run.empirical_means.sum() == pytest.approx(1.0)
    assert np.all(np.abs(run.empirical_means - 0.05) <= 5 * run.standard_errors)
    again = run_choose_winner(20, seed=3, trials=120_000, chunk=25_000)
    assert np.array_equal(run.empirical_means, again.empirical_means)


def test_verify_prisoners_dilemma_cases():
    g = load_game("pd.json")
    cc = verify_candidate(g, JointDistribution.point((0, 0)))
    assert cc.supported_on_pareto and cc.undominated and cc.witness is None
    dd = verify_candidate(g, JointDistribution.point((1, 1)))
    assert not dd.supported_on_pareto and dd.off_pareto == [(1, 1)]
    split = verify_candidate(g, JointDistribution.from_pairs([((0, 1), 0.5), ((1, 0), 0.5)]))
    assert split.supported_on_pareto and not split.undominated
    assert split.witness.support == (((0, 0), 1.0),)
    assert split.improvement == pytest.approx(1.0)
    assert split.common_program == "unchecked"


def test_witness_dominates():
    rng = np.random.default_rng(1)
    for _ in range(30):
        g = Game.from_bimatrix(rng.integers(0, 9, (3, 3)), rng.integers(0, 9, (3, 3)))
        pareto = pareto_optimal_profiles(g)
        w = rng.dirichlet(np.ones(len(pareto)))
        p = JointDistribution.from_pairs(zip(pareto.profiles, w / w.sum()))
        v = verify_candidate(g, p)
        if not v.undominated:
            gain = expected_utility(g, v.witness) - expected_utility(g, p)
            assert np.all(gain >= -1e-8) and gain.sum() > 1e-7


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_choose_winner_distribution_is_undominated(n):
    run = run_choose_winner(n)
    v = verify_candidate(catalog.platonia(n), run.exact_distribution)
    assert v.supported_on_pareto and v.undominated


@pytest.mark.parametrize("kind", [WelfareKind.RAWLSIAN, WelfareKind.BENTHAM_HARSANYI, WelfareKind.BEST_OFF])
def test_utility_based_welfare_outputs_pass_verifier(kind):
    rng = np.random.default_rng(12)
    for _ in range(30):
        g = Game.from_bimatrix(rng.integers(0, 9, (3, 3)), rng.integers(0, 9, (3, 3)))
        v = verify_candidate(g, solve_welfare(g, kind).distribution)
        assert v.supported_on_pareto and v.undominated


def test_percentile_equilibrium_can_be_dominated():
    # undominated only among distributions with the same maximal expected percentile
    payoffs = [[[4, 4], [5, 1], [5, 0], [1, 0]], [[0, 4], [9, 1], [8, 7], [1, 1]],
               [[6, 6], [5, 5], [7, 3], [1, 4]], [[7, 9], [7, 9], [9, 2], [2, 9]]]
    g = Game((tuple("abcd"),) * 2, np.array(payoffs, dtype=float))
    rep = solve_welfare(g, WelfareKind.RAWLSIAN_PERCENTILE)
    v = verify_candidate(g, rep.distribution)
    assert v.supported_on_pareto and not v.undominated

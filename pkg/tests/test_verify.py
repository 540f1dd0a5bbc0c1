import random

from negamoran.digits import SystemParams
from negamoran.salem import ProbVector
from negamoran.verify import CHECKS, DEFAULT_CONFIGS, Context, random_prob_vector, report, run_checks


def test_all_checks_pass_on_a_random_config():
    params = SystemParams(7, 4)
    P = random_prob_vector(random.Random(11), 7)
    results = run_checks(Context(params, P, seed=3, samples=50))
    assert len(results) == len(CHECKS)
    assert all(r.ok for r in results), [r for r in results if not r.ok]


def test_report_is_seed_deterministic():
    ctx = [Context(SystemParams(5, 2), ProbVector.uniform(5), seed=1, samples=40)]
    assert report(ctx) == report(ctx)


def test_failing_check_turns_report_red(monkeypatch):
    import negamoran.verify as v

    monkeypatch.setattr(v, "CHECKS", v.CHECKS + [("broken", lambda ctx: 1 / 0)])
    text, ok = v.report([Context(SystemParams(4, 0), ProbVector.uniform(4), seed=0, samples=10)])
    assert not ok
    assert "FAIL  broken" in text and "ZeroDivisionError" in text


def test_default_configs_are_valid():
    for params, text in DEFAULT_CONFIGS:
        assert isinstance(params, SystemParams) and text

import random

import pytest

from rigwise.errors import (
    AllProvidersFailed,
    EmptyQuery,
    NoProviderAvailable,
    QueryTooLarge,
)
from rigwise.router import (
    Failure,
    GenerationSettings,
    HealthTracker,
    ModelSpec,
    PromptRequest,
    ProviderHealth,
    QueryProfile,
    RoutingDecision,
    ScriptedProvider,
    Success,
    classify_query,
    dispatch_with_failover,
    route,
    update_health,
)
from rigwise.service.resources import default_lexicon, default_registry

GPT, CLAUDE, GEMINI = "gpt-4o", "claude-4-sonnet", "gemini-2.5-pro"


@pytest.fixture(scope="module")
def registry():
    return default_registry()


@pytest.fixture(scope="module")
def lexicon():
    return default_lexicon()


# --- classify_query ---------------------------------------------------------

def test_classify_multimodal_attachment(lexicon):
    profile = classify_query("interpret this seismic section", {"image"}, lexicon)
    assert profile.task_class == "multimodal"


def test_classify_blank_rejected(lexicon):
    with pytest.raises(EmptyQuery):
        classify_query("", set(), lexicon)
    with pytest.raises(EmptyQuery):
        classify_query("   ", set(), lexicon)


def test_classify_code_generation_rule_order(lexicon):
    # "script" fires the code rule before "decline" reaches forecasting
    profile = classify_query("write a decline-curve fitting script", set(), lexicon)
    assert profile.task_class == "code_generation"


def test_classify_default_complex_reasoning(lexicon):
    profile = classify_query("what should we do about well 12?", set(), lexicon)
    assert profile.task_class == "complex_reasoning"


def test_classify_token_count_matches_tokenizer(lexicon):
    from rigwise.rag import count_tokens
    text = "Estimate porosity = 0.21 for SPE-101"
    assert classify_query(text, set(), lexicon).est_tokens == count_tokens(text)


def test_classify_deterministic(lexicon):
    a = classify_query("forecast next year production", set(), lexicon)
    b = classify_query("forecast next year production", set(), lexicon)
    assert a == b


# --- route: the 60-case rule-table fixture ----------------------------------

def mm(est=500, attachments=("image",)):
    return QueryProfile("multimodal", est, frozenset(attachments))


def qp(task, est):
    return QueryProfile(task, est)


# (profile, unavailable model ids, expected chosen) — labels hand-derived
# from the rule table against the shipped three-model registry
ROUTING_CASES = [
    # rule 1: attachment modality, largest modality set, value breaks full ties
    (mm(500, ("image",)), (), GEMINI),
    (mm(500, ("video",)), (), GEMINI),
    (mm(500, ("document",)), (), CLAUDE),
    (mm(500, ("code",)), (), GPT),
    (mm(500, ("image", "video")), (), GEMINI),
    (mm(500, ("image", "document")), (), CLAUDE),
    (mm(500, ("image", "code")), (), GPT),
    (mm(2000, ("video", "document")), (), GEMINI),   # nobody supports both -> value
    (mm(150_000, ("image",)), (), CLAUDE),           # rule-1 tie, window rule next
    (mm(150_000, ("video",)), (), GEMINI),           # rule-1 unique beats window
    (mm(250_000, ("document",)), (), CLAUDE),        # unique support, does not fit
    (mm(500, ("image",)), (GEMINI,), GPT),           # tie on support -> value
    # rule 2: context-window fit (smallest fitting window wins)
    (qp("documentation_analysis", 128_001), (), CLAUDE),
    (qp("documentation_analysis", 130_000), (), CLAUDE),
    (qp("documentation_analysis", 150_000), (), CLAUDE),
    (qp("documentation_analysis", 180_000), (), CLAUDE),
    (qp("documentation_analysis", 200_000), (), CLAUDE),
    (qp("complex_reasoning", 150_000), (), CLAUDE),
    (qp("complex_reasoning", 199_999), (), CLAUDE),
    (qp("code_generation", 150_000), (), CLAUDE),
    (qp("safety_assessment", 140_000), (), CLAUDE),
    (qp("production_forecasting", 160_000), (), CLAUDE),
    (qp("reservoir_characterization", 170_000), (), CLAUDE),
    (qp("drilling_optimization", 190_000), (), CLAUDE),
    (qp("documentation_analysis", 200_001), (), GEMINI),
    (qp("complex_reasoning", 250_000), (), GEMINI),
    (qp("production_forecasting", 500_000), (), GEMINI),
    (qp("code_generation", 999_999), (), GEMINI),
    (qp("documentation_analysis", 1_000_000), (), GEMINI),
    (qp("documentation_analysis", 150_000), (CLAUDE,), GEMINI),
    (qp("complex_reasoning", 128_000), (), GPT),     # fits everything exactly
    # rule 3: reasoning tasks -> highest reasoning score
    (qp("complex_reasoning", 2_000), (), GPT),
    (qp("complex_reasoning", 10), (), GPT),
    (qp("complex_reasoning", 50_000), (), GPT),
    (qp("complex_reasoning", 100_000), (), GPT),
    (qp("code_generation", 500), (), GPT),
    (qp("code_generation", 20_000), (), GPT),
    (qp("code_generation", 100_000), (), GPT),
    (qp("complex_reasoning", 2_000), (GPT,), CLAUDE),
    (qp("code_generation", 2_000), (GPT,), CLAUDE),
    (qp("complex_reasoning", 2_000), (GPT, CLAUDE), GEMINI),
    (qp("code_generation", 500), (GPT, GEMINI), CLAUDE),
    # rule 4: value (reasoning per cost): gemini 12.77 > gpt 6.28 > claude 5.1
    (qp("reservoir_characterization", 3_000), (), GEMINI),
    (qp("production_forecasting", 1_000), (), GEMINI),
    (qp("safety_assessment", 800), (), GEMINI),
    (qp("documentation_analysis", 5_000), (), GEMINI),
    (qp("drilling_optimization", 400), (), GEMINI),
    (qp("reservoir_characterization", 100_000), (), GEMINI),
    (qp("production_forecasting", 128_000), (), GEMINI),
    (qp("safety_assessment", 10), (), GEMINI),
    (qp("reservoir_characterization", 3_000), (GEMINI,), GPT),
    (qp("production_forecasting", 1_000), (GEMINI,), GPT),
    (qp("documentation_analysis", 1_000), (GEMINI, GPT), CLAUDE),
    (qp("safety_assessment", 2_000), (GPT,), GEMINI),
    (qp("drilling_optimization", 2_000), (CLAUDE,), GEMINI),
    # window rule with outages
    (qp("documentation_analysis", 150_000), (GEMINI,), CLAUDE),
    (qp("documentation_analysis", 300_000), (GEMINI,), None),  # QueryTooLarge
    (qp("complex_reasoning", 50), (GPT, CLAUDE, GEMINI), None),  # NoProviderAvailable
    (qp("complex_reasoning", 2_000_000), (), None),  # exceeds every window
    (mm(2_000_000, ("image",)), (), None),
]


def _health_map(registry, unavailable):
    health = {}
    for spec in registry:
        down = spec.model_id in unavailable
        health[spec.model_id] = ProviderHealth(
            available=not down, consecutive_failures=3 if down else 0)
    return health


def test_routing_fixture_has_60_cases():
    assert len(ROUTING_CASES) == 60


@pytest.mark.parametrize("profile,unavailable,expected",
                         ROUTING_CASES,
                         ids=[f"case{i:02d}" for i in range(len(ROUTING_CASES))])
def test_routing_fixture(registry, profile, unavailable, expected):
    health = _health_map(registry, unavailable)
    if expected is None:
        with pytest.raises((QueryTooLarge, NoProviderAvailable)):
            route(profile, registry, health)
    else:
        decision = route(profile, registry, health)
        assert decision.chosen == expected
        assert decision.chosen not in decision.alternates
        live = {m.model_id for m in registry} - set(unavailable)
        assert set(decision.alternates) == live - {decision.chosen}


def test_route_spec_examples(registry):
    health = _health_map(registry, ())
    assert route(mm(), registry, health).chosen == GEMINI
    assert route(qp("documentation_analysis", 150_000), registry, health).chosen == CLAUDE
    assert route(qp("complex_reasoning", 2_000), registry, health).chosen == GPT


def test_route_default_settings(registry):
    decision = route(qp("complex_reasoning", 10), registry, _health_map(registry, ()))
    assert decision.settings == GenerationSettings(temperature=0.0, top_p=0.95)


# --- route properties --------------------------------------------------------

def _random_profile(rng):
    task = rng.choice([
        "reservoir_characterization", "production_forecasting",
        "drilling_optimization", "safety_assessment", "complex_reasoning",
        "code_generation", "documentation_analysis",
    ])
    if rng.random() < 0.25:
        attachments = frozenset(rng.sample(["image", "video", "document", "code"],
                                           rng.randint(1, 2)))
        return QueryProfile("multimodal", rng.randrange(0, 1_200_000), attachments)
    return QueryProfile(task, rng.randrange(0, 1_200_000))


def test_route_pure_function_over_1000_profiles(registry):
    rng = random.Random(11)
    health = _health_map(registry, ())
    for _ in range(1000):
        profile = _random_profile(rng)
        try:
            first = route(profile, registry, health)
        except (QueryTooLarge, NoProviderAvailable):
            with pytest.raises((QueryTooLarge, NoProviderAvailable)):
                route(profile, registry, health)
            continue
        assert route(profile, registry, health) == first


def test_reroute_returns_first_alternate(registry):
    rng = random.Random(12)
    checked = 0
    for _ in range(1000):
        profile = _random_profile(rng)
        health = _health_map(registry, ())
        try:
            first = route(profile, registry, health)
        except (QueryTooLarge, NoProviderAvailable):
            continue
        health = _health_map(registry, (first.chosen,))
        try:
            second = route(profile, registry, health)
        except (QueryTooLarge, NoProviderAvailable):
            continue
        assert second.chosen == first.alternates[0]
        checked += 1
    assert checked > 100


def test_rule2_precedence_claude_band(registry):
    # any 128k < est <= 200k profile lands on claude regardless of task class
    health = _health_map(registry, ())
    rng = random.Random(13)
    tasks = ["reservoir_characterization", "production_forecasting",
             "drilling_optimization", "safety_assessment", "complex_reasoning",
             "code_generation", "documentation_analysis"]
    for _ in range(200):
        est = rng.randrange(128_001, 200_001)
        task = rng.choice(tasks)
        assert route(qp(task, est), registry, health).chosen == CLAUDE


def test_route_never_returns_unavailable(registry):
    health = _health_map(registry, (GEMINI,))
    rng = random.Random(14)
    for _ in range(300):
        profile = _random_profile(rng)
        try:
            decision = route(profile, registry, health)
        except (QueryTooLarge, NoProviderAvailable):
            continue
        assert decision.chosen != GEMINI
        assert GEMINI not in decision.alternates


def test_load_distribution_round_robin():
    specs = [ModelSpec(f"m{i}", 100_000, frozenset({"text"}), 90.0, 10.0)
             for i in range(4)]
    tracker = HealthTracker(m.model_id for m in specs)
    profile = qp("documentation_analysis", 100)
    for _ in range(1000):
        decision = route(profile, specs, tracker.snapshot())
        tracker.begin_request(decision.chosen)
    counts = [tracker.get(m.model_id).outstanding_requests for m in specs]
    assert max(counts) - min(counts) <= 1
    assert sum(counts) == 1000


# --- update_health -----------------------------------------------------------

def test_health_threshold_crossing():
    h = ProviderHealth(consecutive_failures=2)
    out = update_health(h, Failure("boom"))
    assert out.consecutive_failures == 3
    assert out.available is False


def test_health_ewma_update():
    h = ProviderHealth(quality_ewma=0.5)
    out = update_health(h, Success(quality=1.0, latency_ms=0.0))
    assert out.quality_ewma == pytest.approx(0.6)


def test_health_recovery():
    h = ProviderHealth(available=False, consecutive_failures=3)
    out = update_health(h, Success(quality=1.0, latency_ms=100.0))
    assert out.consecutive_failures == 0
    assert out.available is True


def test_health_latency_ewma():
    h = ProviderHealth(latency_ewma=100.0)
    out = update_health(h, Success(quality=1.0, latency_ms=200.0))
    assert out.latency_ewma == pytest.approx(120.0)


# --- dispatch_with_failover ---------------------------------------------------

def _decision():
    return RoutingDecision(chosen="a", alternates=("b", "c"), rationale_tags=("value",))


def test_dispatch_happy_path():
    providers = {"a": ScriptedProvider(["answer-a"]),
                 "b": ScriptedProvider(["answer-b"]),
                 "c": ScriptedProvider(["answer-c"])}
    resp = dispatch_with_failover(_decision(), providers, PromptRequest("q"))
    assert resp.text == "answer-a"
    assert resp.provider == "a"
    assert resp.attempts == 1


def test_dispatch_failover_to_first_alternate():
    providers = {"a": ScriptedProvider(["FAIL"]),
                 "b": ScriptedProvider(["answer-b"]),
                 "c": ScriptedProvider(["answer-c"])}
    resp = dispatch_with_failover(_decision(), providers, PromptRequest("q"))
    assert resp.provider == "b"
    assert resp.attempts == 2
    assert resp.failed_providers[0][0] == "a"


def test_dispatch_all_fail():
    providers = {name: ScriptedProvider(["FAIL"]) for name in "abc"}
    with pytest.raises(AllProvidersFailed) as err:
        dispatch_with_failover(_decision(), providers, PromptRequest("q"))
    assert len(err.value.causes) == 3


def test_dispatch_attempts_bounded_and_tracked():
    tracker = HealthTracker(["a", "b", "c"])
    providers = {"a": ScriptedProvider(["FAIL"]),
                 "b": ScriptedProvider(["FAIL"]),
                 "c": ScriptedProvider(["ok"])}
    resp = dispatch_with_failover(_decision(), providers, PromptRequest("q"),
                                  tracker=tracker)
    assert resp.attempts == 3 <= 3
    assert tracker.get("a").consecutive_failures == 1
    assert tracker.get("c").consecutive_failures == 0
    assert tracker.get("c").outstanding_requests == 0

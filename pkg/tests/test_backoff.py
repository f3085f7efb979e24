import pytest
from hypothesis import given, strategies as st

from urbanscore.errors import ProviderUnavailable
from urbanscore.resilience.backoff import BackoffPolicy, backoff_delay, call_with_retries

POLICY = BackoffPolicy()  # 200 ms base, x2, 3 attempts


class TestBackoffDelay:
    def test_first_attempt_scales_base(self):
        assert backoff_delay(1, POLICY, draw=0.999999) == pytest.approx(0.2, abs=1e-3)
        assert backoff_delay(1, POLICY, draw=0.999999) < 0.2

    def test_third_attempt_half_draw(self):
        assert backoff_delay(3, POLICY, draw=0.5) == pytest.approx(0.4)

    def test_zero_draw_zero_delay(self):
        for attempt in (1, 2, 3):
            assert backoff_delay(attempt, POLICY, draw=0.0) == 0.0

    def test_attempt_bounds(self):
        with pytest.raises(ValueError):
            backoff_delay(0, POLICY, draw=0.5)
        with pytest.raises(ValueError):
            backoff_delay(4, POLICY, draw=0.5)

    @given(st.floats(min_value=0, max_value=0.999999))
    def test_nondecreasing_in_attempt_for_fixed_draw(self, draw):
        delays = [backoff_delay(a, POLICY, draw) for a in (1, 2, 3)]
        assert delays == sorted(delays)


class TestCallWithRetries:
    def test_success_after_transient_failures(self):
        attempts = []
        sleeps = []

        def flaky():
            attempts.append(1)
            if len(attempts) < 3:
                raise ProviderUnavailable("blip")
            return "ok"

        result = call_with_retries(flaky, POLICY, rng=lambda: 0.5,
                                   sleep=sleeps.append)
        assert result == "ok"
        assert len(attempts) == 3
        assert sleeps == [pytest.approx(0.1), pytest.approx(0.2)]

    def test_exhausted_attempts_reraise(self):
        attempts = []

        def dead():
            attempts.append(1)
            raise ProviderUnavailable("down")

        with pytest.raises(ProviderUnavailable):
            call_with_retries(dead, POLICY, rng=lambda: 0.0, sleep=lambda s: None)
        assert len(attempts) == POLICY.max_attempts

    def test_non_retryable_errors_propagate_immediately(self):
        attempts = []

        def broken():
            attempts.append(1)
            raise ValueError("logic bug")

        with pytest.raises(ValueError):
            call_with_retries(broken, POLICY, sleep=lambda s: None)
        assert len(attempts) == 1

    def test_policy_validation(self):
        with pytest.raises(ValueError):
            BackoffPolicy(max_attempts=0)

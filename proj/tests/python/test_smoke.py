"""Smoke tests for the python module. Run with PYTHONPATH pointing at the
directory containing the built _dhtrng extension (ctest wires this up)."""

import sys

try:
    import dhtrng
except ImportError:
    import _dhtrng as dhtrng


def test_generate_deterministic():
    cfg = dhtrng.CircuitConfig()
    cfg.seed = 42
    a = dhtrng.generate(cfg, 4096)
    b = dhtrng.generate(cfg, 4096)
    assert len(a) == 4096
    assert a.to_bytes() == b.to_bytes()
    cfg.seed = 43
    c = dhtrng.generate(cfg, 4096)
    assert a.to_bytes() != c.to_bytes()


def test_q_function():
    assert abs(dhtrng.q_function(0.0) - 0.5) < 1e-12
    assert dhtrng.q_function(2.0) < dhtrng.q_function(1.0)


def test_analytic():
    assert abs(dhtrng.xor2_expectation(0.6, 0.7) - 0.46) < 1e-12
    assert abs(dhtrng.xor_n_expectation([0.5, 0.9, 0.2]) - 0.5) < 1e-12
    assert abs(dhtrng.bias_percent(500100, 499900) - 0.02) < 1e-12


def test_statistics_roundtrip():
    cfg = dhtrng.CircuitConfig()
    cfg.seed = 7
    bits = dhtrng.generate(cfg, 200000)
    monobit = dhtrng.monobit_t1(bits)
    assert monobit.verdict == "pass"
    freq = dhtrng.nist_frequency(bits)
    assert freq.p_value is not None and 0.0 <= freq.p_value <= 1.0
    mcv = dhtrng.mcv_estimate(bits)
    assert 0.9 < mcv.h_min <= 1.0
    coeffs = dhtrng.acf(bits, 100)
    assert len(coeffs) == 100
    assert max(abs(c) for c in coeffs) < 0.3


def test_restart():
    cfg = dhtrng.CircuitConfig()
    cfg.seed = 5
    report, prefixes = dhtrng.restart_test(cfg, trials=4, prefix_bits=32)
    assert report.passed()
    assert len(set(prefixes)) == 4


def test_error_mapping():
    cfg = dhtrng.CircuitConfig()
    cfg.coupling_sets = 0
    try:
        dhtrng.generate(cfg, 16)
    except ValueError:
        pass
    else:
        raise AssertionError("expected ValueError for a bad config")


def main():
    tests = [(name, fn) for name, fn in sorted(globals().items())
             if name.startswith("test_") and callable(fn)]
    for name, fn in tests:
        fn()
        print(f"ok {name}")
    print(f"{len(tests)} smoke tests passed")


if __name__ == "__main__":
    sys.exit(main())

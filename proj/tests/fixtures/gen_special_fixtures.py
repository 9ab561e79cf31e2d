#!/usr/bin/env python3
"""Regenerates the high-precision fixture tables in this directory.

Everything is computed with the decimal module at 160-digit working
precision: erfc and the regularized incomplete gamma from their series
definitions, pi via Machin's formula, and the binary expansion of e from the
factorial series. The C++ implementations are tested against these tables,
so this script must stay independent of the library code.

Usage: python3 gen_special_fixtures.py  (writes CSV files next to itself)
"""

import math
import os
from decimal import Decimal, getcontext

getcontext().prec = 160

HERE = os.path.dirname(os.path.abspath(__file__))


def pi_machin() -> Decimal:
    def atan_inv(n: int) -> Decimal:
        x = Decimal(1) / n
        term = x
        total = x
        x2 = x * x
        k = 1
        while True:
            term *= -x2
            add = term / (2 * k + 1)
            total += add
            if abs(add) < Decimal(10) ** -getcontext().prec:
                return total
            k += 1

    return 16 * atan_inv(5) - 4 * atan_inv(239)


PI = pi_machin()
SQRT_PI = PI.sqrt()
SQRT_2 = Decimal(2).sqrt()


def erf_dec(x: Decimal) -> Decimal:
    # 2/sqrt(pi) * sum (-1)^n x^(2n+1) / (n! (2n+1))
    if x == 0:
        return Decimal(0)
    term = x
    total = x
    x2 = x * x
    n = 1
    while True:
        term *= -x2 / n
        add = term / (2 * n + 1)
        total += add
        if abs(add) < abs(total) * Decimal(10) ** -140:
            break
        n += 1
    return total * 2 / SQRT_PI


def erfc_dec(x: Decimal) -> Decimal:
    return 1 - erf_dec(x)


def phi_dec(x: Decimal) -> Decimal:
    return (1 + erf_dec(x / SQRT_2)) / 2


def q_dec(x: Decimal) -> Decimal:
    return erfc_dec(x / SQRT_2) / 2


def gamma_exact(a: Decimal) -> Decimal:
    # a integer or half-integer only.
    if a == a.to_integral_value():
        return Decimal(math.factorial(int(a) - 1))
    n = int(a - Decimal("0.5"))
    return Decimal(math.factorial(2 * n)) / (Decimal(4) ** n * Decimal(math.factorial(n))) * SQRT_PI


def gamma_p_dec(a: Decimal, x: Decimal) -> Decimal:
    # P(a,x) = x^a e^-x / Gamma(a) * sum x^n / (a (a+1) ... (a+n))
    if x == 0:
        return Decimal(0)
    term = 1 / a
    total = term
    n = 1
    while True:
        term *= x / (a + n)
        total += term
        if abs(term) < abs(total) * Decimal(10) ** -140:
            break
        n += 1
    log_part = a * x.ln() - x
    return total * log_part.exp() / gamma_exact(a)


def gamma_q_dec(a: Decimal, x: Decimal) -> Decimal:
    return 1 - gamma_p_dec(a, x)


def fmt(v: Decimal) -> str:
    return f"{v:.40E}"


def write_special_table() -> None:
    rows = []
    xs = [Decimal(v) / 2 for v in range(-16, 17)]  # -8 .. 8 step 0.5
    xs += [Decimal("1.2815515655"), Decimal("1.1313708499"), Decimal("0.1"), Decimal("-0.1"),
           Decimal("2.0"), Decimal("-2.0"), Decimal("6.0")]
    for x in xs:
        rows.append(("erfc", str(x), "", fmt(erfc_dec(x))))
    for x in [Decimal(v) for v in (-8, -5, -2, -1, 0, 1, 2, 5, 8)]:
        rows.append(("q", str(x), "", fmt(q_dec(x))))
    rows.append(("q", "1.2815515655", "", fmt(q_dec(Decimal("1.2815515655")))))
    gamma_points = [
        ("0.5", "0.25"), ("0.5", "1"), ("0.5", "4"),
        ("1", "0.5"), ("1", "2"), ("1", "10"),
        ("1.5", "0.5"), ("1.5", "3"),
        ("2", "1"), ("2", "5"),
        ("2.5", "2.5"),
        ("3", "2"), ("3", "9"),
        ("5", "4"), ("5", "12"),
        ("24.5", "20"), ("24.5", "30"),
        ("3906", "3850"), ("3906", "3960"),
    ]
    for a, x in gamma_points:
        rows.append(("gamma_q", a, x, fmt(gamma_q_dec(Decimal(a), Decimal(x)))))
    with open(os.path.join(HERE, "special_functions.csv"), "w") as f:
        f.write("kind,a,x,value\n")
        for r in rows:
            f.write(",".join(r) + "\n")


def binary_digits(value: Decimal, int_bits: str, count: int) -> str:
    digits = int_bits
    frac = value - int(int_bits, 2)
    while len(digits) < count:
        frac *= 2
        if frac >= 1:
            digits += "1"
            frac -= 1
        else:
            digits += "0"
    return digits[:count]


def e_binary_digits(count: int) -> str:
    e = Decimal(0)
    term = Decimal(1)
    k = 0
    while term > Decimal(10) ** -155:
        e += term
        k += 1
        term /= k
    return binary_digits(e, "10", count)


def write_e_expansion_table() -> None:
    # The standard's worked Frequency example runs on the first 100 binary
    # digits of pi (integer part included) and reports P-value 0.109599.
    pi_bits = binary_digits(PI, "11", 100)
    assert 2 * pi_bits.count("1") - 100 == -16, "pi digit convention drifted"
    p_pi = erfc_dec(Decimal(16) / Decimal(100).sqrt() / SQRT_2)
    assert abs(p_pi - Decimal("0.109599")) < Decimal("0.0000005")

    bits = pi_bits
    n = 100
    ones = bits.count("1")
    s = 2 * ones - n

    rows = []
    s_obs = Decimal(abs(s)) / Decimal(n).sqrt()
    rows.append(("frequency", "", fmt(p_pi)))

    # Second frequency vector: the first 100 digits of e (data.e convention).
    e_bits = e_binary_digits(100)
    s_e = 2 * e_bits.count("1") - 100
    rows.append(("frequency_e", f"S={s_e}",
                 fmt(erfc_dec(Decimal(abs(s_e)) / Decimal(100).sqrt() / SQRT_2))))

    # Block frequency, M = 10.
    m_blk = 10
    chi2 = Decimal(0)
    for b in range(n // m_blk):
        pi_i = Decimal(bits[b * m_blk:(b + 1) * m_blk].count("1")) / m_blk
        chi2 += (pi_i - Decimal("0.5")) ** 2
    chi2 *= 4 * m_blk
    rows.append(("block_frequency", "M=10", fmt(gamma_q_dec(Decimal(n // m_blk) / 2, chi2 / 2))))

    # Runs.
    pi = Decimal(ones) / n
    v_obs = 1 + sum(1 for i in range(n - 1) if bits[i] != bits[i + 1])
    num = abs(Decimal(v_obs) - 2 * n * pi * (1 - pi))
    den = 2 * Decimal(2 * n).sqrt() * pi * (1 - pi)
    rows.append(("runs", "", fmt(erfc_dec(num / den))))

    # Cumulative sums, forward and backward.
    def cusum_p(z: int) -> Decimal:
        zd = Decimal(z)
        sqn = Decimal(n).sqrt()
        p = Decimal(1)
        k_lo1 = math.floor((-n / z + 1) / 4)
        k_hi1 = math.floor((n / z - 1) / 4)
        for k in range(k_lo1, k_hi1 + 1):
            p -= phi_dec((4 * k + 1) * zd / sqn) - phi_dec((4 * k - 1) * zd / sqn)
        k_lo2 = math.floor((-n / z - 3) / 4)
        for k in range(k_lo2, k_hi1 + 1):
            p += phi_dec((4 * k + 3) * zd / sqn) - phi_dec((4 * k + 1) * zd / sqn)
        return p

    walk = 0
    z_fwd = 0
    for c in bits:
        walk += 1 if c == "1" else -1
        z_fwd = max(z_fwd, abs(walk))
    walk = 0
    z_bwd = 0
    for c in reversed(bits):
        walk += 1 if c == "1" else -1
        z_bwd = max(z_bwd, abs(walk))
    rows.append(("cusum_forward", f"z={z_fwd}", fmt(cusum_p(z_fwd))))
    rows.append(("cusum_backward", f"z={z_bwd}", fmt(cusum_p(z_bwd))))

    # Serial, m = 2 (cyclic windows).
    def window_counts(m: int) -> list:
        counts = [0] * (1 << m)
        for i in range(n):
            w = 0
            for j in range(m):
                w = (w << 1) | (bits[(i + j) % n] == "1")
            counts[w] += 1
        return counts

    def psi_sq(m: int) -> Decimal:
        if m <= 0:
            return Decimal(0)
        counts = window_counts(m)
        return Decimal(2 ** m) * sum(Decimal(c) ** 2 for c in counts) / n - n

    d1 = psi_sq(2) - psi_sq(1)
    d2 = psi_sq(2) - 2 * psi_sq(1) + psi_sq(0)
    rows.append(("serial_p1", "m=2", fmt(gamma_q_dec(Decimal(1), d1 / 2))))
    rows.append(("serial_p2", "m=2", fmt(gamma_q_dec(Decimal("0.5"), d2 / 2))))

    # Approximate entropy, m = 2.
    def phi_stat(m: int) -> Decimal:
        counts = window_counts(m)
        total = Decimal(0)
        for c in counts:
            if c:
                ci = Decimal(c) / n
                total += ci * ci.ln()
        return total

    apen = phi_stat(2) - phi_stat(3)
    chi2_apen = 2 * n * (Decimal(2).ln() - apen)
    rows.append(("approx_entropy", "m=2", fmt(gamma_q_dec(Decimal(2), chi2_apen / 2))))

    with open(os.path.join(HERE, "pi_binary_digits.txt"), "w") as f:
        f.write(bits)
    with open(os.path.join(HERE, "e_binary_digits.txt"), "w") as f:
        f.write(e_bits)
    with open(os.path.join(HERE, "sp800_22_e_expansion.csv"), "w") as f:
        f.write("test,param,expected_p\n")
        for r in rows:
            f.write(",".join(r) + "\n")


if __name__ == "__main__":
    write_special_table()
    write_e_expansion_table()
    print("fixtures written to", HERE)

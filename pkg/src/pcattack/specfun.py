"""Scalar special functions for the secrecy expressions.

Covers the generalized exponential integral E_n, the upper incomplete gamma
function at non-positive integer order, the modified Bessel function K_1 and
erfc. Accuracy target is 1e-12 relative over the documented ranges; the
``*_scaled`` variants return ``exp(x) * f(x)`` so callers can form products
such as ``exp(a) * E_n(a)`` without overflow.
"""

import math

EULER = 0.57721566490153286060651209008240243
SQRT_PI = 1.7724538509055160272981674833411452
MAXIT = 10000
EPS = 2.220446049250313e-16
FPMIN = 1e-300
LN2 = math.log(2.0)

# above this the cCDFs are zero in double precision
_EXP_CUTOFF = 745.0


class DomainError(ValueError):
    """Argument outside the domain of a special function."""


def expn_scaled(n, x):
    """Return ``exp(x) * E_n(x)`` for integer ``n >= 1`` and ``x > 0``.

    Unchecked; see :func:`exp_integral_en_scaled`.
    """
    if x > 1.0:
        # modified Lentz continued fraction
        nm1 = n - 1
        b = x + n
        c = 1.0 / FPMIN
        d = 1.0 / b
        h = d
        for i in range(1, MAXIT):
            a = -i * (nm1 + i)
            b += 2.0
            d = 1.0 / (a * d + b)
            c = b + a / c
            dl = c * d
            h *= dl
            if abs(dl - 1.0) < EPS:
                return h
        raise ArithmeticError("E_n continued fraction did not converge")
    return math.exp(x) * _expn_series(n, x)


def _expn_series(n, x):
    nm1 = n - 1
    ans = 1.0 / nm1 if nm1 else -math.log(x) - EULER
    fact = 1.0
    for i in range(1, MAXIT):
        fact *= -x / i
        if i != nm1:
            dl = -fact / (i - nm1)
        else:
            psi = -EULER
            for k in range(1, nm1 + 1):
                psi += 1.0 / k
            dl = fact * (-math.log(x) + psi)
        ans += dl
        if abs(dl) < abs(ans) * EPS:
            return ans
    raise ArithmeticError("E_n series did not converge")


def _expn(n, x):
    if x > 1.0:
        if x > _EXP_CUTOFF:
            return 0.0
        return expn_scaled(n, x) * math.exp(-x)
    return _expn_series(n, x)


def _check_order(n, lowest):
    if isinstance(n, bool) or int(n) != n or n < lowest:
        raise DomainError(f"order must be an integer >= {lowest}, got {n!r}")
    return int(n)


def _check_positive(x):
    x = float(x)
    if not x > 0.0:
        raise DomainError(f"argument must be > 0, got {x!r}")
    return x


def exp_integral_en(n, x):
    """Generalized exponential integral ``E_n(x) = int_1^inf exp(-x t) t^-n dt``.

    Series expansion for ``x <= 1``, continued fraction above. Underflows to
    zero for ``x > 745``.
    """
    n = _check_order(n, 1)
    return _expn(n, _check_positive(x))


def exp_integral_en_scaled(n, x):
    """``exp(x) * E_n(x)``, finite for all ``x > 0``."""
    n = _check_order(n, 1)
    return expn_scaled(n, _check_positive(x))


def upper_incomplete_gamma_negint(n, x):
    """Upper incomplete gamma ``Gamma(-n, x)`` for integer ``n >= 0``.

    Evaluated as ``x**-n * E_{n+1}(x)``, which sidesteps the poles of the
    complete gamma function at the non-positive integers.
    """
    n = _check_order(n, 0)
    x = _check_positive(x)
    if n == 0:
        return _expn(1, x)
    try:
        scale = x ** -n
    except OverflowError:
        scale = math.inf
    en = _expn(n + 1, x)
    if math.isfinite(scale) and scale > 0.0 and en > 0.0:
        return scale * en
    # x**-n or E_{n+1} out of range: combine in log space
    log_val = -n * math.log(x) + math.log(expn_scaled(n + 1, x)) - x
    if log_val > 709.78:
        return math.inf
    return math.exp(log_val)


def _k1_series(x):
    # K1(x) = 1/x + ln(x/2) I1(x) - (x/4) sum_k [psi(k+1)+psi(k+2)] (x^2/4)^k / (k!(k+1)!)
    y = 0.25 * x * x
    term = 1.0
    i1 = 1.0
    psi_k1 = -EULER
    psi_k2 = 1.0 - EULER
    tail = psi_k1 + psi_k2
    k = 0
    while True:
        k += 1
        term *= y / (k * (k + 1))
        psi_k1 += 1.0 / k
        psi_k2 += 1.0 / (k + 1)
        i1 += term
        tail += (psi_k1 + psi_k2) * term
        if term < EPS * i1 and abs((psi_k1 + psi_k2) * term) < EPS * abs(tail):
            break
    i1 *= 0.5 * x
    return 1.0 / x + math.log(0.5 * x) * i1 - 0.25 * x * tail


def _k1_scaled_cf(x):
    # Steed/Temme continued fraction, valid for x >= 2; returns exp(x) K1(x)
    b = 2.0 * (1.0 + x)
    d = 1.0 / b
    h = delh = d
    q1 = 0.0
    q2 = 1.0
    a1 = 0.25
    q = c = a1
    a = -a1
    s = 1.0 + q * delh
    for i in range(2, MAXIT):
        a -= 2 * (i - 1)
        c = -a * c / i
        qnew = (q1 - b * q2) / a
        q1 = q2
        q2 = qnew
        q += c * qnew
        b += 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h += delh
        dels = q * delh
        s += dels
        if abs(dels / s) < EPS:
            break
    else:
        raise ArithmeticError("K1 continued fraction did not converge")
    h = a1 * h
    k0 = math.sqrt(math.pi / (2.0 * x)) / s
    return k0 * (x + 0.5 - h) / x


def k1_scaled(x):
    """Return ``exp(x) * K_1(x)`` for ``x > 0``; unchecked."""
    if x <= 2.0:
        return math.exp(x) * _k1_series(x)
    return _k1_scaled_cf(x)


def bessel_k1(x):
    """Modified Bessel function of the second kind, order one.

    Ascending series for ``x <= 2`` and Steed's continued fraction beyond.
    """
    x = _check_positive(x)
    if x <= 2.0:
        return _k1_series(x)
    if x > _EXP_CUTOFF:
        return 0.0
    return _k1_scaled_cf(x) * math.exp(-x)


def bessel_k1_scaled(x):
    return k1_scaled(_check_positive(x))


def erfc(x):
    """Complementary error function (C library ``erfc``)."""
    return math.erfc(x)


def ierfc_sqrtpi(u):
    """``exp(-u^2) - sqrt(pi)*u*erfc(u)`` for ``u >= 0``.

    This is ``sqrt(pi)`` times the first repeated integral of erfc. The
    direct difference cancels badly for large ``u``, so from ``u = 2`` on
    it is taken from the erfc continued fraction instead.
    """
    if u < 2.0:
        return math.exp(-u * u) - SQRT_PI * u * math.erfc(u)
    if u * u > _EXP_CUTOFF:
        return 0.0
    r = _erfc_tail_cf(u)
    return math.exp(-u * u) * r / (u + r)


def _erfc_tail_cf(u):
    """Return r = (1/2)/(u + 1/(u + (3/2)/(u + ...))) by modified Lentz.

    With this r, ``erfc(u) = exp(-u^2) / (sqrt(pi) * (u + r))``.
    """
    f = FPMIN
    c = f
    d = 0.0
    for j in range(1, MAXIT):
        aj = 0.5 * j
        d = u + aj * d
        if d == 0.0:
            d = FPMIN
        c = u + aj / c
        if c == 0.0:
            c = FPMIN
        d = 1.0 / d
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < EPS:
            return f
    raise ArithmeticError("erfc continued fraction did not converge")

"""
drivers/contfrac.py
────────────────────────────────────────────────────────
- (Driver Layer) 정확 연분수 + 2차 무리수(서드) 산술
- 입력 종류
  • RationalValue       : p/q (Fraction, 유클리드 호제법 → 유한 전개)
  • QuadraticValue      : a + b√d (정수 형태 (P + √D)/Q 로 바꾼 뒤 주기 알고리즘)
  • HighPrecisionValue  : 십진 문자열 (또는 mpmath 상수명) → 구간 [x−u, x+u] 양 끝의
                          몫이 일치하는 동안만 인증, 어긋나면 PrecisionExhausted
- 수렴분수 (p_k, q_k) 는 전부 파이썬 정수 (크기 제한 없음)

!! 주의 사항 !!
- 수렴분수 측(side): 유리수/2차 무리수는 정확 부호, 고정밀 실수는 교대 성질(k 홀수 = 위)
- liouville_truncated(K) = Σ_{k≤K} 10^{-k!} 는 유리수 → RationalValue
- 고정밀 입력은 절대 조용히 잘리지 않음 (인증 실패 = 예외)

📌 JSON α 스펙
  {"rational": [p, q]} | {"quadratic": {"a": .., "b": .., "d": ..}}
  | {"decimal": "3.14159…" 또는 "pi"|"e"|"sqrt2"|"golden"} | {"liouville_truncated": K}
  (정수/분수는 문자열 "17", "1/2" 허용 → 53비트 절단 방지)
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from typing import Any, Mapping, Optional, Union

import mpmath

from config import HP_DIGITS
from ghtorus.errors import ExhaustedExpansion, PrecisionExhausted, RationalAlpha

log = logging.getLogger(__name__)

Rat = Union[int, Fraction]


# =====================================================
# 1️⃣ 2차 무리수 x + y√d
# =====================================================
def _squarefree_split(d: int) -> tuple[int, int]:
    """d = f²·d' (d' 무제곱) → (f, d')."""
    f, rest, p = 1, d, 2
    while p * p <= rest:
        while rest % (p * p) == 0:
            rest //= p * p
            f *= p
        p += 1
    return f, rest


def _is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


@dataclass(frozen=True)
class QuadraticNumber:
    """x + y√d (x, y 유리수, d 무제곱 양의 정수 또는 1)."""

    x: Fraction
    y: Fraction
    d: int

    @classmethod
    def make(cls, x: Rat, y: Rat, d: int) -> "QuadraticNumber":
        if d < 1:
            raise ValueError("d 는 양의 정수여야 합니다.")
        f, core = _squarefree_split(d)
        xf, yf = Fraction(x), Fraction(y) * f
        if core == 1:
            return cls(xf + yf, Fraction(0), 1)
        return cls(xf, yf, core)

    @classmethod
    def rational(cls, x: Rat, d: int = 1) -> "QuadraticNumber":
        return cls(Fraction(x), Fraction(0), d)

    # -------------------------------------------------
    # 산술
    # -------------------------------------------------
    def _coerce(self, other: Any) -> "QuadraticNumber":
        if isinstance(other, QuadraticNumber):
            if other.y != 0 and self.y != 0 and other.d != self.d:
                raise ValueError("서로 다른 2차체의 원소는 섞을 수 없습니다.")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadraticNumber(Fraction(other), Fraction(0), self.d)
        return NotImplemented

    def _field(self, other: "QuadraticNumber") -> int:
        return self.d if self.y != 0 else other.d

    def __add__(self, other: Any) -> "QuadraticNumber":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadraticNumber(self.x + o.x, self.y + o.y, self._field(o))

    __radd__ = __add__

    def __neg__(self) -> "QuadraticNumber":
        return QuadraticNumber(-self.x, -self.y, self.d)

    def __sub__(self, other: Any) -> "QuadraticNumber":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: Any) -> "QuadraticNumber":
        return (-self) + other

    def __mul__(self, other: Any) -> "QuadraticNumber":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        d = self._field(o)
        return QuadraticNumber(self.x * o.x + self.y * o.y * d, self.x * o.y + self.y * o.x, d)

    __rmul__ = __mul__

    def square(self) -> "QuadraticNumber":
        return self * self

    # -------------------------------------------------
    # 판정
    # -------------------------------------------------
    @property
    def is_rational(self) -> bool:
        return self.y == 0

    def as_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError("무리수는 Fraction 으로 바꿀 수 없습니다.")
        return self.x

    def sign(self) -> int:
        x, y = self.x, self.y
        if y == 0:
            return (x > 0) - (x < 0)
        if x == 0 or (x > 0) == (y > 0):
            return 1 if y > 0 else -1
        # 부호가 다름: x² 와 y²d 비교
        diff = x * x - y * y * self.d
        return (1 if x > 0 else -1) * ((diff > 0) - (diff < 0))

    def __lt__(self, other: Any) -> bool:
        return (self - other).sign() < 0

    def floor(self) -> int:
        n = math.floor(float(self))
        while (self - n).sign() < 0:
            n -= 1
        while (self - (n + 1)).sign() >= 0:
            n += 1
        return n

    def __float__(self) -> float:
        x, y = self.x, self.y
        if y == 0 or x == 0 or (x > 0) == (y > 0):
            return float(x) + float(y) * math.sqrt(self.d)
        # 부호가 다르면 켤레로 나눠 상쇄를 피함
        return float(x * x - y * y * self.d) / (float(x) - float(y) * math.sqrt(self.d))

    def to_spec(self) -> dict:
        return {"a": str(self.x), "b": str(self.y), "d": str(self.d)}


def sqrt_in_field(n: int, d: int) -> Optional[QuadraticNumber]:
    """√n 이 Q(√d) 안에 있으면 그 원소, 아니면 None (무리수 인증)."""
    if n < 0:
        raise ValueError("n 은 음수가 아니어야 합니다.")
    if _is_square(n):
        return QuadraticNumber.rational(math.isqrt(n), d)
    if d > 1 and _is_square(n * d):
        return QuadraticNumber(Fraction(0), Fraction(math.isqrt(n * d), d), d)
    return None


def is_integer_value(value: Union[Fraction, QuadraticNumber, int]) -> bool:
    if isinstance(value, QuadraticNumber):
        return value.is_rational and value.x.denominator == 1
    return Fraction(value).denominator == 1


def log_distance_to_integers(value: Union[Fraction, QuadraticNumber, int]) -> float:
    """
    log dist(value, Z). 정수면 -inf.
    유리수는 큰 정수 log 로 계산 (float 하한 아래까지 표현).
    """
    if isinstance(value, QuadraticNumber) and not value.is_rational:
        fl = value.floor()
        return math.log(min(abs(float(value - fl)), abs(float(value - (fl + 1)))))
    frac = value.as_fraction() if isinstance(value, QuadraticNumber) else Fraction(value)
    num, den = frac.numerator, frac.denominator
    rem = num % den
    r = min(rem, den - rem)
    if r == 0:
        return -math.inf
    return math.log(r) - math.log(den)


# =====================================================
# 2️⃣ α 값 종류
# =====================================================
@dataclass(frozen=True)
class RationalValue:
    value: Fraction
    label: str = ""

    kind = "Rational"

    def __float__(self) -> float:
        return float(self.value)


@dataclass(frozen=True)
class QuadraticValue:
    value: QuadraticNumber
    label: str = ""

    kind = "QuadraticIrrational"

    def __float__(self) -> float:
        return float(self.value)


@dataclass(frozen=True)
class HighPrecisionValue:
    lo: Fraction
    hi: Fraction
    digits: str
    label: str = ""

    kind = "HighPrecisionReal"

    def __float__(self) -> float:
        return float((self.lo + self.hi) / 2)


AlphaValue = Union[RationalValue, QuadraticValue, HighPrecisionValue]

NAMED_CONSTANTS = {
    "pi": lambda: mpmath.pi,
    "e": lambda: mpmath.e,
    "sqrt2": lambda: mpmath.sqrt(2),
    "golden": lambda: mpmath.phi,
    "euler_gamma": lambda: mpmath.euler,
}


def _as_fraction(value: Any) -> Fraction:
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(str(value).strip())


def decimal_value(text: str, *, digits: int = HP_DIGITS) -> HighPrecisionValue:
    """십진 문자열 또는 상수명 → 구간 [x − u, x + u] (u = 마지막 자리 단위)."""
    label = text.strip()
    if label in NAMED_CONSTANTS:
        with mpmath.workdps(digits + 20):
            text = mpmath.nstr(NAMED_CONSTANTS[label](), digits, strip_zeros=False)
    exponent = Decimal(text).as_tuple().exponent
    if not isinstance(exponent, int):
        raise ValueError(f"유한한 십진수가 아닙니다: {text[:32]}")
    mid = Fraction(text)
    unit = Fraction(10) ** exponent
    return HighPrecisionValue(mid - unit, mid + unit, text, label if label in NAMED_CONSTANTS else "decimal")


def liouville_truncated(K: int) -> RationalValue:
    if K < 1:
        raise ValueError("K 는 1 이상이어야 합니다.")
    total = sum((Fraction(1, 10 ** math.factorial(k)) for k in range(1, K + 1)), Fraction(0))
    return RationalValue(total, f"liouville_truncated({K})")


def parse_alpha(spec: Mapping[str, Any], *, digits: int = HP_DIGITS) -> AlphaValue:
    """JSON α 스펙 → 값 객체."""
    if len(spec) != 1:
        raise ValueError("α 스펙은 키가 정확히 하나여야 합니다.")
    (key, body), = spec.items()
    if key == "rational":
        p, q = body
        return RationalValue(Fraction(int(str(p)), int(str(q))), "rational")
    if key == "quadratic":
        qn = QuadraticNumber.make(_as_fraction(body.get("a", 0)), _as_fraction(body.get("b", 0)), int(str(body["d"])))
        if qn.is_rational:
            return RationalValue(qn.x, "quadratic")
        return QuadraticValue(qn, "quadratic")
    if key == "decimal":
        return decimal_value(str(body), digits=digits)
    if key == "liouville_truncated":
        return liouville_truncated(int(body))
    raise ValueError(f"알 수 없는 α 종류: {key!r}")


def alpha_to_spec(value: AlphaValue) -> dict:
    if isinstance(value, QuadraticValue):
        return {"quadratic": value.value.to_spec()}
    if isinstance(value, HighPrecisionValue):
        return {"decimal": value.label if value.label in NAMED_CONSTANTS else value.digits}
    if value.label.startswith("liouville_truncated"):
        return {"liouville_truncated": int(value.label.split("(")[1].rstrip(")"))}
    return {"rational": [str(value.value.numerator), str(value.value.denominator)]}


# =====================================================
# 3️⃣ 연분수 전개
# =====================================================
@dataclass(frozen=True)
class CFExpansion:
    value: AlphaValue
    partial_quotients: tuple[int, ...]
    convergents: tuple[tuple[int, int], ...]
    terminated: bool = False

    @property
    def value_kind(self) -> str:
        return self.value.kind

    def side(self, k: int) -> int:
        """+1: p_k/q_k > x, -1: < x, 0: 같음."""
        p, q = self.convergents[k]
        val = self.value
        if isinstance(val, RationalValue):
            diff = Fraction(p, q) - val.value
            return (diff > 0) - (diff < 0)
        if isinstance(val, QuadraticValue):
            return (QuadraticNumber.rational(Fraction(p, q), val.value.d) - val.value).sign()
        return 1 if k % 2 == 1 else -1


def _convergents(quotients: list[int]) -> list[tuple[int, int]]:
    out: list[tuple[int, int]] = []
    p2, p1, q2, q1 = 0, 1, 1, 0
    for a in quotients:
        p2, p1 = p1, a * p1 + p2
        q2, q1 = q1, a * q1 + q2
        out.append((p1, q1))
    return out


def _rational_quotients(x: Fraction, K: int) -> tuple[list[int], bool]:
    num, den = x.numerator, x.denominator
    out: list[int] = []
    while den != 0 and len(out) < K:
        a, r = divmod(num, den)
        out.append(a)
        num, den = den, r
    return out, den == 0


def _quadratic_quotients(qn: QuadraticNumber, K: int) -> list[int]:
    L = math.lcm(qn.x.denominator, qn.y.denominator)
    P0 = int(qn.x * L)
    B = int(qn.y * L)
    D = B * B * qn.d
    P, Q = (P0, L) if B > 0 else (-P0, -L)
    if (D - P * P) % Q != 0:
        P, D, Q = P * abs(Q), D * Q * Q, Q * abs(Q)
    root = math.isqrt(D)
    out: list[int] = []
    for _ in range(K):
        a = (P + root) // Q if Q > 0 else (P + root + 1) // Q
        out.append(a)
        P = a * Q - P
        Q = (D - P * P) // Q
    return out


def _interval_quotients(lo: Fraction, hi: Fraction, K: int) -> list[int]:
    out: list[int] = []
    for k in range(K):
        a_lo, a_hi = math.floor(lo), math.floor(hi)
        if a_lo != a_hi:
            raise PrecisionExhausted(
                f"{k}번째 부분몫을 인증할 수 없습니다 (구간 [{float(lo):.6g}, {float(hi):.6g}]). 자릿수를 늘리세요."
            )
        out.append(a_lo)
        if lo == a_lo:
            raise PrecisionExhausted(f"{k}번째 단계에서 구간이 정수에 닿았습니다.")
        lo, hi = 1 / (hi - a_lo), 1 / (lo - a_lo)
    return out


def continued_fraction(x: AlphaValue, K: int) -> CFExpansion:
    """첫 K 개 부분몫과 수렴분수 (정확)."""
    if K < 1:
        raise ValueError("K 는 1 이상이어야 합니다.")
    terminated = False
    if isinstance(x, RationalValue):
        quotients, terminated = _rational_quotients(x.value, K)
    elif isinstance(x, QuadraticValue):
        quotients = _quadratic_quotients(x.value, K)
    else:
        quotients = _interval_quotients(x.lo, x.hi, K)
    log.debug("[CF] %s K=%d → %s", x.kind, K, quotients[:8])
    return CFExpansion(x, tuple(quotients), tuple(_convergents(quotients)), terminated)


def killer_convergents(alpha: CFExpansion, side: str, count: int) -> list[tuple[int, int]]:
    """
    α 의 한쪽(Above: p/q > α, Below: p/q < α) 수렴분수 count 개.
    교대 성질 때문에 한 칸 건너 하나씩 선택됨.
    """
    if side not in ("Above", "Below"):
        raise ValueError("side 는 'Above' | 'Below' 중 하나여야 합니다.")
    if isinstance(alpha.value, RationalValue):
        raise RationalAlpha("유리수 α 에서는 killer 수렴분수를 만들 수 없습니다.")
    want = 1 if side == "Above" else -1
    picked = [alpha.convergents[k] for k in range(len(alpha.convergents)) if alpha.side(k) == want]
    if len(picked) < count:
        raise ExhaustedExpansion(
            f"{side} 쪽 수렴분수가 {len(picked)}개뿐입니다 (요청 {count}). K 를 늘리세요."
        )
    return picked[:count]


def expansion_for(alpha: AlphaValue, side: str, count: int) -> CFExpansion:
    """한쪽 수렴분수 count 개를 얻을 만큼 전개 (2·count + 2 항)."""
    return continued_fraction(alpha, 2 * count + 2)


if __name__ == "__main__":
    sqrt2 = QuadraticValue(QuadraticNumber.make(0, 1, 2))
    cf = continued_fraction(sqrt2, 8)
    print(cf.partial_quotients, cf.convergents)
    print(killer_convergents(cf, "Above", 3))

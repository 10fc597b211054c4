"""Exact simulation of the per-millionaire comparison circuit.

Two interchangeable paths produce measurement outcomes:

* ``run_qc_full`` simulates the whole 3m+2 qubit circuit as a dense state
  vector (small m only; this is the ground-truth oracle), and
* ``run_qc_factored`` samples the identical outcome distribution directly.
  The circuit is a tensor product over bit positions -- each oracle CNOT
  lands on a |-> target and therefore acts as a Z on its control -- so the
  outcome triple factors per bit into 4 equiprobable parity-consistent
  values.

Qubit indices are little-endian: qubit q is bit q of a basis-state index,
matching the register stacking where the topmost drawn register holds the
least significant bits.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from qpec.bits import BitVector

# Dense path allocates 2^(3m+2) complex amplitudes; stop where that stops
# being a few megabytes.
FULL_PATH_QUBIT_CAP = 20

NORM_TOL = 1e-9

_INV_SQRT2 = 1.0 / np.sqrt(2.0)


class StateVector:
    """Dense complex state over ``num_qubits`` qubits with in-place gates."""

    def __init__(self, num_qubits: int, amplitudes: np.ndarray | None = None):
        if num_qubits < 1:
            raise ValueError("need at least one qubit")
        self.num_qubits = num_qubits
        if amplitudes is None:
            self.amps = np.zeros(1 << num_qubits, dtype=np.complex128)
            self.amps[0] = 1.0
        else:
            amplitudes = np.asarray(amplitudes, dtype=np.complex128)
            if amplitudes.shape != (1 << num_qubits,):
                raise ValueError("amplitude array has wrong shape")
            self.amps = amplitudes.copy()

    def _axis(self, qubit: int) -> int:
        if not 0 <= qubit < self.num_qubits:
            raise ValueError(f"qubit {qubit} out of range")
        return self.num_qubits - 1 - qubit

    def _halves(self, qubit: int):
        view = self.amps.reshape([2] * self.num_qubits)
        view = np.moveaxis(view, self._axis(qubit), 0)
        # index with Ellipsis so single-qubit systems yield 0-d views,
        # not detached scalars
        return view[0, ...], view[1, ...]

    def hadamard(self, qubit: int) -> None:
        h0, h1 = self._halves(qubit)
        tmp = h0.copy()
        h0[...] = (tmp + h1) * _INV_SQRT2
        h1[...] = (tmp - h1) * _INV_SQRT2

    def x(self, qubit: int) -> None:
        h0, h1 = self._halves(qubit)
        tmp = h0.copy()
        h0[...] = h1
        h1[...] = tmp

    def z(self, qubit: int) -> None:
        _, h1 = self._halves(qubit)
        h1 *= -1.0

    def cnot(self, control: int, target: int) -> None:
        if control == target:
            raise ValueError("control and target must differ")
        c_ax = self._axis(control)
        t_ax = self._axis(target)
        view = self.amps.reshape([2] * self.num_qubits)
        sub = np.moveaxis(view, c_ax, 0)[1]
        t_sub = t_ax - 1 if t_ax > c_ax else t_ax
        w = np.moveaxis(sub, t_sub, 0)
        tmp = w[0, ...].copy()
        w[0, ...] = w[1, ...]
        w[1, ...] = tmp

    def probabilities(self, qubits: list[int]) -> np.ndarray:
        """Marginal Born probabilities; bit j of the index is qubits[j]."""
        if len(set(qubits)) != len(qubits):
            raise ValueError("duplicate qubits")
        p = np.abs(self.amps.reshape([2] * self.num_qubits)) ** 2
        front = [self._axis(q) for q in reversed(qubits)]
        rest = [ax for ax in range(self.num_qubits) if ax not in set(front)]
        return p.transpose(front + rest).reshape(1 << len(qubits), -1).sum(axis=1)

    def measure(self, qubits: list[int], rng) -> int:
        """Sample the listed qubits jointly, collapse, return packed outcome."""
        probs = self.probabilities(qubits)
        total = probs.sum()
        if not np.isclose(total, 1.0, atol=1e-6):
            raise ValueError(f"state not normalized: total probability {total}")
        outcome = int(rng.choice(len(probs), p=probs / total))
        idx = np.arange(self.amps.size, dtype=np.uint64)
        keep = np.ones(self.amps.size, dtype=bool)
        for j, q in enumerate(qubits):
            keep &= ((idx >> np.uint64(q)) & np.uint64(1)) == np.uint64((outcome >> j) & 1)
        self.amps[~keep] = 0.0
        self.amps /= np.sqrt((np.abs(self.amps) ** 2).sum())
        return outcome

    def norm(self) -> float:
        return float(np.sqrt((np.abs(self.amps) ** 2).sum()))

    def copy(self) -> StateVector:
        return StateVector(self.num_qubits, self.amps)


@dataclass(frozen=True)
class RegisterLayout:
    """Qubit assignment for one comparison circuit of register width m.

    Stacking from least significant: millionaire input register AIR, her
    output qubit AOR, broker input register SIR, broker output qubit SOR,
    then the referee register TIR on top.  Total 3m+2 qubits.
    """

    m: int
    air: tuple[int, ...]
    aor: int
    sir: tuple[int, ...]
    sor: int
    tir: tuple[int, ...]

    @classmethod
    def standard(cls, m: int) -> RegisterLayout:
        if m < 1:
            raise ValueError("m must be >= 1")
        return cls(
            m=m,
            air=tuple(range(0, m)),
            aor=m,
            sir=tuple(range(m + 1, 2 * m + 1)),
            sor=2 * m + 1,
            tir=tuple(range(2 * m + 2, 3 * m + 2)),
        )

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError("m must be >= 1")
        if len(self.air) != self.m or len(self.sir) != self.m or len(self.tir) != self.m:
            raise ValueError("input registers must each hold m qubits")
        everything = [*self.air, self.aor, *self.sir, self.sor, *self.tir]
        if sorted(everything) != list(range(self.total_qubits)):
            raise ValueError("registers must disjointly cover 0..3m+1")

    @property
    def total_qubits(self) -> int:
        return 3 * self.m + 2

    def triplet(self, k: int) -> tuple[int, int, int]:
        """Qubits carrying position k of the shared triplets: (TIR, SIR, AIR)."""
        return self.tir[k], self.sir[k], self.air[k]


@dataclass(frozen=True)
class MeasurementOutcome:
    """One circuit's measured registers: referee y2, broker y1, millionaire y0."""

    y2: BitVector
    y1: BitVector
    y0: BitVector

    def __post_init__(self) -> None:
        if not self.y2.length == self.y1.length == self.y0.length:
            raise ValueError("register widths differ")

    def parity_sum(self) -> BitVector:
        return self.y2 ^ self.y1 ^ self.y0

    def label(self) -> str:
        """Big-endian concatenation y2 || y1 || y0, as in measurement counts."""
        return f"{self.y2}{self.y1}{self.y0}"


def prepare_ghz3_registers(layout: RegisterLayout) -> StateVector:
    """m GHZ triplets across (TIR, SIR, AIR), with SOR and AOR set to |->."""
    if layout.total_qubits > FULL_PATH_QUBIT_CAP:
        raise ValueError(
            f"{layout.total_qubits} qubits exceeds dense cap {FULL_PATH_QUBIT_CAP}; "
            "use run_qc_factored"
        )
    sv = StateVector(layout.total_qubits)
    for k in range(layout.m):
        t, s, a = layout.triplet(k)
        sv.hadamard(t)
        sv.cnot(t, s)
        sv.cnot(t, a)
    for q in (layout.sor, layout.aor):
        sv.x(q)
        sv.hadamard(q)
    return sv


def apply_phase_oracle(
    sv: StateVector, secret: BitVector, input_register: tuple[int, ...], output_qubit: int
) -> None:
    """CNOT fan-in from the register's set-bit positions into the output qubit.

    With the output prepared in |-> each CNOT kicks back a phase (-1)^{x_k},
    so the net effect on branch |x> is (-1)^{secret . x}.
    """
    if secret.length != len(input_register):
        raise ValueError("secret width does not match register")
    for k in range(secret.length):
        if secret.bit(k):
            sv.cnot(input_register[k], output_qubit)


def _assert_minus(sv: StateVector, qubit: int) -> None:
    # |-> maps to |1> under H; check and undo.
    sv.hadamard(qubit)
    p = sv.probabilities([qubit])
    sv.hadamard(qubit)
    if abs(p[1] - 1.0) > 1e-9:
        raise AssertionError(f"output qubit {qubit} left the |-> state (p1={p[1]})")


def run_qc_full(m: int, s: BitVector, f: BitVector, rng) -> MeasurementOutcome:
    """Dense-path run of one comparison circuit; exact but capped in m."""
    if s.length != m or f.length != m:
        raise ValueError("s and f must both have length m")
    layout = RegisterLayout.standard(m)
    sv = prepare_ghz3_registers(layout)
    apply_phase_oracle(sv, s, layout.sir, layout.sor)
    apply_phase_oracle(sv, f, layout.air, layout.aor)
    for q in (*layout.tir, *layout.sir, *layout.air):
        sv.hadamard(q)
    y2 = BitVector(sv.measure(list(layout.tir), rng), m)
    y1 = BitVector(sv.measure(list(layout.sir), rng), m)
    y0 = BitVector(sv.measure(list(layout.air), rng), m)
    _assert_minus(sv, layout.sor)
    _assert_minus(sv, layout.aor)
    if abs(sv.norm() - 1.0) > NORM_TOL:
        raise AssertionError("state norm drifted")
    return MeasurementOutcome(y2, y1, y0)


def run_qc_factored(m: int, s: BitVector, f: BitVector, rng) -> MeasurementOutcome:
    """Sample one outcome from the exact per-bit factorization.

    For each bit k the triple (y2_k, y1_k, y0_k) is uniform over the four
    values with y2_k ^ y1_k ^ y0_k = s_k ^ f_k: draw (a, b) uniformly and set
    the third component to a ^ b ^ (s_k ^ f_k).
    """
    if s.length != m or f.length != m:
        raise ValueError("s and f must both have length m")
    a = rng.integers(0, 2, size=m)
    b = rng.integers(0, 2, size=m)
    y2 = _pack(a)
    y1 = _pack(b)
    y0 = y2 ^ y1 ^ (s ^ f).value
    return MeasurementOutcome(BitVector(y2, m), BitVector(y1, m), BitVector(y0, m))


def sample_factored(m: int, s: BitVector, f: BitVector, shots: int, rng):
    """Vectorized ``run_qc_factored``: three uint64 arrays of packed outcomes."""
    if s.length != m or f.length != m:
        raise ValueError("s and f must both have length m")
    weights = np.uint64(1) << np.arange(m, dtype=np.uint64)
    a = rng.integers(0, 2, size=(shots, m)).astype(np.uint64)
    b = rng.integers(0, 2, size=(shots, m)).astype(np.uint64)
    y2 = (a * weights).sum(axis=1)
    y1 = (b * weights).sum(axis=1)
    y0 = y2 ^ y1 ^ np.uint64((s ^ f).value)
    return y2, y1, y0


def _pack(bits: np.ndarray) -> int:
    value = 0
    for k, bit in enumerate(bits):
        value |= int(bit) << k
    return value


def exact_distribution_full(m: int, s: BitVector, f: BitVector) -> np.ndarray:
    """Exact outcome distribution of the dense path over (y2, y1, y0).

    Returns a vector of length 2^(3m) indexed by (y2 << 2m) | (y1 << m) | y0.
    """
    if s.length != m or f.length != m:
        raise ValueError("s and f must both have length m")
    layout = RegisterLayout.standard(m)
    sv = prepare_ghz3_registers(layout)
    apply_phase_oracle(sv, s, layout.sir, layout.sor)
    apply_phase_oracle(sv, f, layout.air, layout.aor)
    for q in (*layout.tir, *layout.sir, *layout.air):
        sv.hadamard(q)
    p = np.abs(sv.amps.reshape([2] * layout.total_qubits)) ** 2
    ordered = (*reversed(layout.tir), *reversed(layout.sir), *reversed(layout.air))
    front = [sv._axis(q) for q in ordered]
    rest = [ax for ax in range(layout.total_qubits) if ax not in set(front)]
    return p.transpose(front + rest).reshape(1 << (3 * m), -1).sum(axis=1)


def factored_distribution(m: int, s: BitVector, f: BitVector) -> np.ndarray:
    """Closed-form outcome distribution: uniform over parity-consistent triples."""
    if s.length != m or f.length != m:
        raise ValueError("s and f must both have length m")
    target = (s ^ f).value
    dist = np.zeros(1 << (3 * m))
    weight = 0.25**m
    for y2 in range(1 << m):
        for y1 in range(1 << m):
            y0 = y2 ^ y1 ^ target
            dist[(y2 << (2 * m)) | (y1 << m) | y0] = weight
    return dist


def total_variation(p: np.ndarray, q: np.ndarray) -> float:
    return 0.5 * float(np.abs(np.asarray(p) - np.asarray(q)).sum())


def verify_oracle_equivalence(
    max_m: int = 3,
    tol: float = 1e-9,
    sampled_pairs: int = 3,
    seed: int = 0,
    factored=factored_distribution,
) -> list[str]:
    """Compare dense-path and factored distributions; return failure notes.

    Exhaustive over all (s, f) pairs for m <= 3, then ``sampled_pairs`` random
    pairs for each m up to ``max_m``.  ``factored`` is injectable so a
    deliberately broken sampler can be shown to trip the check.
    """
    if 3 * max_m + 2 > FULL_PATH_QUBIT_CAP:
        raise ValueError(f"max_m {max_m} exceeds the dense-path cap")
    failures: list[str] = []

    def check(m: int, s: BitVector, f: BitVector) -> None:
        tv = total_variation(exact_distribution_full(m, s, f), factored(m, s, f))
        if tv > tol:
            failures.append(f"m={m} s={s} f={f}: total variation {tv:.3e} exceeds {tol}")

    for m in range(1, min(max_m, 3) + 1):
        for sv_val, fv_val in itertools.product(range(1 << m), repeat=2):
            check(m, BitVector(sv_val, m), BitVector(fv_val, m))
    from qpec.rng import stream

    gen = stream(seed, "verify")
    for m in range(4, max_m + 1):
        for _ in range(sampled_pairs):
            check(m, BitVector.random(m, gen), BitVector.random(m, gen))
    return failures


class QubitSystem:
    """A handful of jointly-evolving qubits addressed by role name.

    Used to model transmitted quantum systems exactly: GHZ triplets, decoy
    qubits, and whatever an eavesdropper attaches to them.  ``tampered`` is
    set by attack code so the protocol knows the factored shortcut no longer
    applies to this system.
    """

    def __init__(self, sv: StateVector, roles: dict[str, int]):
        self.sv = sv
        self.roles = dict(roles)
        self.tampered = False

    @classmethod
    def ghz3(cls) -> QubitSystem:
        sv = StateVector(3)
        sv.hadamard(0)
        sv.cnot(0, 1)
        sv.cnot(0, 2)
        return cls(sv, {"T": 0, "S": 1, "A": 2})

    @classmethod
    def single(cls, basis: str, bit: int, role: str = "D") -> QubitSystem:
        sv = StateVector(1)
        if bit:
            sv.x(0)
        if basis == "x":
            sv.hadamard(0)
        elif basis != "z":
            raise ValueError(f"unknown basis {basis!r}")
        return cls(sv, {role: 0})

    def _q(self, role: str) -> int:
        try:
            return self.roles[role]
        except KeyError:
            raise KeyError(f"no qubit plays role {role!r}") from None

    def add_qubit(self, role: str, basis: str = "z", bit: int = 0) -> None:
        """Tensor a freshly prepared qubit into the system under ``role``."""
        if role in self.roles:
            raise ValueError(f"role {role!r} already assigned")
        n = self.sv.num_qubits
        amps = np.zeros(1 << (n + 1), dtype=np.complex128)
        amps[: 1 << n] = self.sv.amps
        self.sv = StateVector(n + 1, amps)
        self.roles[role] = n
        if bit:
            self.sv.x(n)
        if basis == "x":
            self.sv.hadamard(n)
        elif basis != "z":
            raise ValueError(f"unknown basis {basis!r}")

    def relabel(self, old: str, new: str) -> None:
        if new in self.roles:
            raise ValueError(f"role {new!r} already assigned")
        self.roles[new] = self.roles.pop(old)

    def hadamard(self, role: str) -> None:
        self.sv.hadamard(self._q(role))

    def x(self, role: str) -> None:
        self.sv.x(self._q(role))

    def z(self, role: str) -> None:
        self.sv.z(self._q(role))

    def cnot(self, control_role: str, target_role: str) -> None:
        self.sv.cnot(self._q(control_role), self._q(target_role))

    def measure_role(self, role: str, rng) -> int:
        return self.sv.measure([self._q(role)], rng)

    def measure_in_basis(self, role: str, basis: str, rng) -> int:
        """Measure in z or x basis, leaving the qubit in the observed state."""
        if basis == "z":
            return self.measure_role(role, rng)
        if basis == "x":
            self.hadamard(role)
            bit = self.measure_role(role, rng)
            self.hadamard(role)
            return bit
        raise ValueError(f"unknown basis {basis!r}")

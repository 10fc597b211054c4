"""Eavesdropper models, insider-attack experiments, and leakage estimators.

Channel attacks operate on transmitted sequences qubit by qubit.  Eve cannot
tell decoys from triplet legs, so every injector treats all slots uniformly;
the only kind-dependent branch is in the photon-number-splitting model, where
the *source* physics differs (an extra photon of an entangled leg is
entangled, an extra photon of a decoy pulse is an identical product copy).

The record an eavesdropper accumulates never includes a referee register
value: those qubits are never transmitted.
"""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field

import numpy as np

from qpec.bits import BitVector
from qpec.qsim import QubitSystem
from qpec.rng import stream

ATTACK_KINDS = ("none", "measure-resend", "intercept-resend", "entangle-measure", "pns")

_BASES = ("z", "x")


@dataclass(frozen=True)
class AttackModel:
    """Which channel attack runs, plus its per-kind parameters.

    basis_policy applies to measure-resend ("computational" or "random");
    substitute applies to intercept-resend ("measured" resends Eve's observed
    state, "zero" transmits a fresh |0> while Eve keeps the original);
    multi_photon_prob applies to pns.
    """

    kind: str = "none"
    basis_policy: str = "computational"
    substitute: str = "measured"
    multi_photon_prob: float = 1.0

    def __post_init__(self) -> None:
        if self.kind not in ATTACK_KINDS:
            raise ValueError(f"unknown attack kind {self.kind!r}; expected one of {ATTACK_KINDS}")
        if self.basis_policy not in ("computational", "random"):
            raise ValueError(f"unknown basis policy {self.basis_policy!r}")
        if self.substitute not in ("measured", "zero"):
            raise ValueError(f"unknown substitute policy {self.substitute!r}")
        if not 0.0 <= self.multi_photon_prob <= 1.0:
            raise ValueError("multi_photon_prob must lie in [0, 1]")

    @property
    def active(self) -> bool:
        return self.kind != "none"

    @classmethod
    def from_json(cls, data) -> AttackModel:
        if data is None:
            return cls()
        if isinstance(data, str):
            return cls(kind=data)
        if isinstance(data, dict):
            known = {"kind", "basis_policy", "substitute", "multi_photon_prob"}
            extra = set(data) - known
            if extra:
                raise ValueError(f"unknown attack fields: {sorted(extra)}")
            return cls(**data)
        raise ValueError(f"attack must be a string or object, got {type(data).__name__}")

    def to_json(self):
        if self.kind == "none":
            return "none"
        out = {"kind": self.kind}
        if self.kind == "measure-resend":
            out["basis_policy"] = self.basis_policy
        if self.kind == "intercept-resend":
            out["substitute"] = self.substitute
        if self.kind == "pns":
            out["multi_photon_prob"] = self.multi_photon_prob
        return out


@dataclass(frozen=True)
class Observation:
    """One qubit Eve measured or captured in transit."""

    seq_id: str
    index: int
    basis: str
    bit: int
    note: str = ""


@dataclass
class AncillaRef:
    """A qubit Eve holds that is (or was) entangled with a transmitted one."""

    circuit: int
    position: int | None
    system: QubitSystem
    role: str


@dataclass
class EveRecord:
    """Everything the eavesdropper ends up knowing.

    y3 holds her post-protocol ancilla parities per circuit; public_y1 and
    public_y0 are copies of broadcast register values.  There is no field
    for the referee register: she never sees one.
    """

    attack: str
    observations: list[Observation] = field(default_factory=list)
    ancillas: list[AncillaRef] = field(default_factory=list)
    y3: dict[int, BitVector] = field(default_factory=dict)
    public_y1: dict[int, BitVector] = field(default_factory=dict)
    public_y0: dict[int, BitVector] = field(default_factory=dict)

    def sum_estimate(self, circuit: int, m: int) -> BitVector | None:
        """Eve's best reconstruction of the circuit's encoded sum."""
        y3 = self.y3.get(circuit)
        y1 = self.public_y1.get(circuit)
        y0 = self.public_y0.get(circuit)
        if y1 is None or y0 is None:
            return None
        if y3 is None:
            y3 = BitVector.zeros(m)
        return y1 ^ y0 ^ y3


def _eve_role(system: QubitSystem) -> str:
    return f"E{sum(1 for r in system.roles if r.startswith('E'))}"


def _choose_basis(policy: str, rng) -> str:
    if policy == "computational":
        return "z"
    return _BASES[int(rng.integers(0, 2))]


def apply_attack(model: AttackModel | None, sequences, rng) -> EveRecord | None:
    """Run the configured channel attack over every transmitted sequence.

    Mutates the quantum systems riding the channel and returns Eve's record,
    or None when no attack is configured.
    """
    if model is None or not model.active:
        return None
    record = EveRecord(attack=model.kind)
    for seq in sequences:
        for idx, slot in enumerate(seq.slots):
            if model.kind == "measure-resend":
                _measure_and_resend(slot, seq, idx, _choose_basis(model.basis_policy, rng), rng, record)
            elif model.kind == "intercept-resend":
                _intercept(slot, seq, idx, model.substitute, rng, record)
            elif model.kind == "entangle-measure":
                _entangle(slot, seq, rng, record)
            elif model.kind == "pns":
                if rng.random() < model.multi_photon_prob:
                    _split_photon(slot, seq, rng, record)
    return record


def _measure_and_resend(slot, seq, idx, basis, rng, record) -> None:
    system, role = slot.handle()
    system.tampered = True
    bit = system.measure_in_basis(role, basis, rng)
    record.observations.append(Observation(seq.seq_id, idx, basis, bit))


def _intercept(slot, seq, idx, substitute, rng, record) -> None:
    basis = _BASES[int(rng.integers(0, 2))]
    if substitute == "measured":
        _measure_and_resend(slot, seq, idx, basis, rng, record)
        return
    # Eve pockets the original qubit and ships a fresh |0> in its place.
    system, role = slot.handle()
    system.tampered = True
    bit = system.measure_in_basis(role, basis, rng)
    system.relabel(role, _eve_role(system))
    fresh = QubitSystem.single("z", 0)
    fresh.tampered = True
    slot.system, slot.role = fresh, "D"
    record.observations.append(Observation(seq.seq_id, idx, basis, bit, note="kept-original"))


def _entangle(slot, seq, rng, record) -> None:
    system, role = slot.handle()
    system.tampered = True
    eve_role = _eve_role(system)
    system.add_qubit(eve_role)
    system.cnot(role, eve_role)
    record.ancillas.append(AncillaRef(seq.circuit, slot.position, system, eve_role))


def _split_photon(slot, seq, rng, record) -> None:
    if slot.kind == "data":
        # The source emitted one more photon of the same entangled mode:
        # the triplet simply gains a leg that Eve holds.
        system, role = slot.handle()
        system.tampered = True
        eve_role = _eve_role(system)
        system.add_qubit(eve_role)
        system.cnot(role, eve_role)
        record.ancillas.append(AncillaRef(seq.circuit, slot.position, system, eve_role))
    else:
        # Extra photon of a decoy pulse: an identical, unentangled copy.
        # Nothing on the channel changes, so nothing can be detected.
        copy = QubitSystem.single(slot.decoy.basis, slot.decoy.bit)
        basis = _BASES[int(rng.integers(0, 2))]
        bit = copy.measure_in_basis("D", basis, rng)
        record.observations.append(
            Observation(seq.seq_id, slot.position if slot.position is not None else -1,
                        basis, bit, note="pns-copy")
        )


def finish_eavesdropping(record: EveRecord, m: int, rng) -> None:
    """Eve measures her held ancillas in the Hadamard basis after the run.

    Per circuit she packs the parity of her ancilla outcomes at each register
    position into an m-bit y3 value (positions she never touched count as 0).
    """
    acc: dict[int, dict[int, int]] = defaultdict(lambda: defaultdict(int))
    touched: set[int] = set()
    for a in record.ancillas:
        a.system.hadamard(a.role)
        bit = a.system.measure_role(a.role, rng)
        touched.add(a.circuit)
        if a.position is not None and a.position < m:
            acc[a.circuit][a.position] ^= bit
    for circuit in touched:
        value = 0
        for k, bit in acc[circuit].items():
            value |= bit << k
        record.y3[circuit] = BitVector(value, m)


# ---------------------------------------------------------------------------
# statistics helpers


def chi2_uniformity(counts) -> tuple[float, int]:
    """Chi-square statistic and dof against the uniform distribution."""
    counts = np.asarray(counts, dtype=float)
    total = counts.sum()
    if total == 0 or counts.size < 2:
        raise ValueError("need at least two cells and one sample")
    expected = total / counts.size
    stat = float(((counts - expected) ** 2 / expected).sum())
    return stat, counts.size - 1


def mutual_information_mm(xs, ys) -> float:
    """Plug-in mutual information in bits with the Miller-Madow correction.

    The correction subtracts the positive small-sample bias; estimates may
    come out slightly negative for independent variables.
    """
    xs = list(xs)
    ys = list(ys)
    if len(xs) != len(ys) or not xs:
        raise ValueError("need equal-length nonempty samples")
    n = len(xs)
    cx = Counter(xs)
    cy = Counter(ys)
    cxy = Counter(zip(xs, ys))

    def entropy(counter) -> float:
        return -sum((c / n) * math.log2(c / n) for c in counter.values())

    plugin = entropy(cx) + entropy(cy) - entropy(cxy)
    correction = (len(cx) + len(cy) - len(cxy) - 1) / (2 * n * math.log(2))
    return plugin + correction


# ---------------------------------------------------------------------------
# experiments


@dataclass
class _BareSlot:
    system: QubitSystem
    role: str
    kind: str
    position: int | None
    decoy: object = None

    def handle(self):
        return self.system, self.role


@dataclass
class _BareSeq:
    seq_id: str
    circuit: int
    receiver: str
    slots: list


_DECOY_STATES = (("z", 0), ("z", 1), ("x", 0), ("x", 1))


def decoy_detection_experiment(model: AttackModel, num_decoys: int, seed: int) -> dict:
    """Push decoys through the attacked channel; measure each in its prep basis."""
    gen = stream(seed, "decoy-exp", model.kind)
    mismatches = 0
    batch = 1000
    done = 0
    while done < num_decoys:
        count = min(batch, num_decoys - done)
        preps = [_DECOY_STATES[int(gen.integers(0, 4))] for _ in range(count)]
        slots = []
        for basis, bit in preps:
            rec = type("R", (), {"basis": basis, "bit": bit})()
            slots.append(_BareSlot(QubitSystem.single(basis, bit), "D", "decoy", None, rec))
        seq = _BareSeq("exp/decoys", 0, "receiver", slots)
        apply_attack(model, [seq], gen)
        for (basis, bit), slot in zip(preps, slots):
            observed = slot.system.measure_in_basis(slot.role, basis, gen)
            mismatches += observed != bit
        done += count
    return {
        "attack": model.kind,
        "decoys": num_decoys,
        "mismatches": mismatches,
        "detection_rate": mismatches / num_decoys,
    }


def leakage_experiment(model: AttackModel, m: int, trials: int, seed: int) -> dict:
    """Repeated single-millionaire runs under attack; what does Eve's data say?

    Returns the per-trial residuals (her sum estimate XOR the true encoded
    sum), a chi-square uniformity statistic over those residuals, and the
    Miller-Madow mutual information between her estimate and the fortune.
    """
    from qpec.protocol import ProtocolConfig, run_protocol

    residuals: list[int] = []
    estimates: list[int] = []
    fortunes_seen: list[int] = []
    gen = stream(seed, "leakage", model.kind)
    for t in range(trials):
        f = BitVector.random(m, gen)
        s = BitVector.random(m, gen)
        config = ProtocolConfig(
            n=1,
            m=m,
            seed=int(gen.integers(0, 1 << 62)),
            decoy_rate=0.0,
            attack=model,
            decoy_tolerance=1.0,
            sacrifice_count=0,
            fortunes=[f],
            sophia_secret=s,
        )
        rep = run_protocol(config)
        assert not rep.aborted
        est = rep.eve_record.sum_estimate(0, m)
        truth = s ^ f
        estimates.append(est.value)
        fortunes_seen.append(f.value)
        residuals.append((est ^ truth).value)
    counts = np.bincount(residuals, minlength=1 << m)
    stat, dof = chi2_uniformity(counts)
    return {
        "attack": model.kind,
        "m": m,
        "trials": trials,
        "residual_counts": counts,
        "chi2_stat": stat,
        "chi2_dof": dof,
        "mi_bits": mutual_information_mm(estimates, fortunes_seen),
    }


def attack_experiment(
    model: AttackModel,
    n: int,
    m: int,
    trials: int,
    seed: int,
    decoy_rate: float = 0.25,
) -> dict:
    """Full-protocol attack statistics: detection rate, leakage, verdict damage.

    Runs with a fully tolerant decoy threshold and no sacrificial triplets so
    every trial completes; the detection rate reported is the per-decoy
    mismatch frequency that an intolerant run would have acted on.  Half the
    trials plant an equal fortune pair so verdict errors have a chance to
    show in both directions.
    """
    from qpec.protocol import ProtocolConfig, run_protocol

    gen = stream(seed, "attack-exp", model.kind)
    decoys = mismatches = 0
    verdict_errors = 0
    estimates: list[int] = []
    fortunes_seen: list[int] = []
    for t in range(trials):
        fortunes = [BitVector.random(m, gen) for _ in range(n)]
        if n >= 2 and gen.random() < 0.5:
            fortunes[1] = fortunes[0]
        s = BitVector.random(m, gen)
        config = ProtocolConfig(
            n=n,
            m=m,
            seed=int(gen.integers(0, 1 << 62)),
            decoy_rate=decoy_rate,
            attack=model,
            decoy_tolerance=1.0,
            sacrifice_count=0,
            fortunes=fortunes,
            sophia_secret=s,
        )
        rep = run_protocol(config)
        decoys += rep.detection.decoys
        mismatches += rep.detection.mismatches
        truth = {(v.i, v.j): fortunes[v.i] == fortunes[v.j] for v in rep.verdicts}
        if any(v.equal != truth[(v.i, v.j)] for v in rep.verdicts):
            verdict_errors += 1
        if rep.eve_record is not None:
            est = rep.eve_record.sum_estimate(0, m)
            if est is not None:
                estimates.append(est.value)
                fortunes_seen.append(fortunes[0].value)
    return {
        "attack": model.to_json(),
        "trials": trials,
        "detection_rate": mismatches / decoys if decoys else 0.0,
        "eve_mi_bits": mutual_information_mm(estimates, fortunes_seen) if estimates else 0.0,
        "verdict_error_rate": verdict_errors / trials,
    }


def participant_attack(
    attacker,
    victim: int,
    model: AttackModel,
    m: int,
    n: int,
    trials: int,
    seed: int,
) -> dict:
    """Insider attack: a legitimate party eavesdrops another channel.

    ``attacker`` is "sophia" or a millionaire index.  The attacker applies
    the given channel attack to the victim millionaire's transmissions only,
    then tries to reconstruct the victim's fortune using everything she
    legitimately knows on top of what she stole.  Returns the residual
    distribution of her fortune estimate; flat means she learned nothing.

    The referee is not modeled here: he never touches a channel, and what he
    legitimately holds (each encoded sum) reveals no fortune without the
    broker's secret.
    """
    if attacker == "trent":
        raise ValueError("the referee holds encoded sums only; nothing to simulate")
    if attacker == "sophia":
        if n < 1:
            raise ValueError("need a victim millionaire")
    elif isinstance(attacker, int):
        if attacker == victim:
            raise ValueError("attacker and victim must differ")
    else:
        raise ValueError(f"unknown attacker {attacker!r}")

    from qpec.protocol import (
        ProtocolConfig,
        decoy_check,
        distribute_entanglement,
        run_quantum_phase,
        validate_entanglement,
    )

    gen = stream(seed, "participant", str(attacker), victim, model.kind)
    residuals: list[int] = []
    for t in range(trials):
        fortunes = [BitVector.random(m, gen) for _ in range(n)]
        s = BitVector.random(m, gen)
        config = ProtocolConfig(
            n=n,
            m=m,
            seed=int(gen.integers(0, 1 << 62)),
            decoy_rate=0.0,
            decoy_tolerance=1.0,
            sacrifice_count=0,
            fortunes=fortunes,
            sophia_secret=s,
        )
        dist, transcript = distribute_entanglement(config)
        channel = dist.channels[victim]
        if attacker == "sophia":
            # She already receives the broker-bound legs; she taps the
            # millionaire-bound sequence.
            scope = [channel.seq_y0]
        else:
            scope = [channel.seq_y1, channel.seq_y0]
        record = apply_attack(model, scope, stream(config.seed, "insider"))
        decoy_check(dist, transcript, config)
        validate_entanglement(dist, transcript, config)
        outcomes = run_quantum_phase(config, fortunes, s, dist)
        if record is not None:
            finish_eavesdropping(record, m, stream(config.seed, "insider-final"))
            record.public_y1 = {i: o.y1 for i, o in enumerate(outcomes)}
            record.public_y0 = {i: o.y0 for i, o in enumerate(outcomes)}
        est_sum = record.sum_estimate(victim, m)
        if attacker == "sophia":
            fortune_estimate = s ^ est_sum
        else:
            # A millionaire knows her own fortune but not the broker secret;
            # the stolen parities leave the victim's sum masked all the same.
            fortune_estimate = est_sum
        residuals.append((fortune_estimate ^ fortunes[victim]).value)
    counts = np.bincount(residuals, minlength=1 << m)
    stat, dof = chi2_uniformity(counts)
    return {
        "attacker": attacker,
        "victim": victim,
        "attack": model.kind,
        "trials": trials,
        "residual_counts": counts,
        "chi2_stat": stat,
        "chi2_dof": dof,
    }

"""Protocol engine: distribution, eavesdropping checks, quantum and classical
phases, and verdict broadcasting.

One run proceeds as the parties would execute it:

1. the referee (trent) prepares GHZ triplets and transmits one leg of each to
   the broker (sophia) and one to the owning millionaire (alice[i]), decoy
   qubits interleaved;
2. decoy positions are announced and checked; mismatches abort the run;
3. sacrificial triplets are consumed to spot broken entanglement;
4. each party applies its phase oracle, Hadamards, and measures;
5. the measured y1 and y0 registers travel back over the authenticated
   classical channel; trent combines them with his private y2 registers into
   per-millionaire encoded sums and broadcasts pairwise equality verdicts.

Referee registers (y2) and encoded sums never enter the transcript.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from qpec.attacks import AttackModel, EveRecord, apply_attack, finish_eavesdropping
from qpec.bits import BitVector
from qpec.qsim import MeasurementOutcome, QubitSystem, run_qc_factored
from qpec.report import EfficiencyMetrics, compute_efficiency
from qpec.rng import stream


class ConfigError(ValueError):
    """Invalid protocol configuration."""


@dataclass(frozen=True)
class PartyId:
    """trent (referee), sophia (broker), or alice (millionaire, indexed)."""

    role: str
    index: int | None = None

    def __post_init__(self) -> None:
        if self.role not in ("trent", "sophia", "alice"):
            raise ValueError(f"unknown role {self.role!r}")
        if self.role == "alice":
            if self.index is None or self.index < 0:
                raise ValueError("alice needs a nonnegative index")
        elif self.index is not None:
            raise ValueError(f"{self.role} takes no index")

    def __str__(self) -> str:
        return self.role if self.index is None else f"{self.role}[{self.index}]"


TRENT = PartyId("trent")
SOPHIA = PartyId("sophia")


def alice(i: int) -> PartyId:
    return PartyId("alice", i)


@dataclass(frozen=True)
class ClassicalMessage:
    sender: str
    receiver: str  # "*" for broadcast
    kind: str
    payload: object
    authenticated: bool = True


@dataclass(frozen=True)
class QuantumEvent:
    sender: str
    receiver: str
    seq_id: str
    num_qubits: int


class Transcript:
    """Append-only log of everything that crossed a channel."""

    def __init__(self) -> None:
        self._events: list[tuple[str, object]] = []

    def send(self, sender, receiver, kind: str, payload) -> ClassicalMessage:
        msg = ClassicalMessage(str(sender), str(receiver), kind, payload)
        self._events.append(("classical", msg))
        return msg

    def transmit(self, sender, receiver, seq_id: str, num_qubits: int) -> QuantumEvent:
        evt = QuantumEvent(str(sender), str(receiver), seq_id, num_qubits)
        self._events.append(("quantum", evt))
        return evt

    @property
    def events(self) -> tuple[tuple[str, object], ...]:
        return tuple(self._events)

    @property
    def classical(self) -> tuple[ClassicalMessage, ...]:
        return tuple(e for k, e in self._events if k == "classical")

    @property
    def quantum(self) -> tuple[QuantumEvent, ...]:
        return tuple(e for k, e in self._events if k == "quantum")

    def public_view(self) -> dict:
        return {
            "events": [
                {
                    "channel": kind,
                    **(
                        {
                            "sender": e.sender,
                            "receiver": e.receiver,
                            "kind": e.kind,
                            "payload": e.payload,
                        }
                        if kind == "classical"
                        else {
                            "sender": e.sender,
                            "receiver": e.receiver,
                            "seq_id": e.seq_id,
                            "num_qubits": e.num_qubits,
                        }
                    ),
                }
                for kind, e in self._events
            ]
        }


@dataclass(frozen=True)
class Verdict:
    i: int
    j: int
    equal: bool


@dataclass(frozen=True)
class DetectionStats:
    decoys: int
    mismatches: int
    error_rate: float
    passed: bool


@dataclass
class ComparisonReport:
    """Outcome of one protocol run.

    Fields after ``abort_reason`` are simulation-side attachments (the
    referee's private sums, raw outcomes, the transcript, the eavesdropper's
    record); they are excluded from comparison and from serialization.
    """

    n: int
    m: int
    seed: int
    verdicts: list[Verdict]
    efficiency: EfficiencyMetrics
    detection: DetectionStats | None
    aborted: bool
    abort_reason: str | None
    trent_sums: list[BitVector] | None = field(default=None, compare=False, repr=False)
    outcomes: list[MeasurementOutcome] | None = field(default=None, compare=False, repr=False)
    transcript: Transcript | None = field(default=None, compare=False, repr=False)
    eve_record: EveRecord | None = field(default=None, compare=False, repr=False)


_CONFIG_KEYS = {
    "n",
    "m",
    "seed",
    "decoy_rate",
    "batch_plan",
    "attack",
    "two_party_mode",
    "fortunes",
    "sophia_secret",
    "sacrifice_count",
    "decoy_tolerance",
}


@dataclass
class ProtocolConfig:
    """Everything a run needs beyond the fortunes themselves.

    ``decoy_tolerance`` is the mismatch rate the decoy check accepts (0 in
    honest deployments; experiments raise it to observe attacks without
    aborting).  ``sacrifice_count`` is how many extra triplets per circuit
    the entanglement validation consumes.
    """

    n: int
    m: int
    seed: int
    decoy_rate: float = 0.25
    batch_plan: list[list[int]] | None = None
    attack: AttackModel = field(default_factory=AttackModel)
    two_party_mode: bool = False
    fortunes: list[BitVector] | None = None
    sophia_secret: BitVector | None = None
    sacrifice_count: int = 2
    decoy_tolerance: float = 0.0

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 1:
            raise ConfigError(f"n must be a positive integer, got {self.n!r}")
        if not isinstance(self.m, int) or not 1 <= self.m <= 64:
            raise ConfigError(f"m must be an integer in [1, 64], got {self.m!r}")
        if not isinstance(self.seed, int) or self.seed < 0:
            raise ConfigError(f"seed must be a nonnegative integer, got {self.seed!r}")
        if not 0.0 <= self.decoy_rate < 1.0:
            raise ConfigError(f"decoy_rate must lie in [0, 1), got {self.decoy_rate!r}")
        if not 0.0 <= self.decoy_tolerance <= 1.0:
            raise ConfigError("decoy_tolerance must lie in [0, 1]")
        if self.sacrifice_count < 0:
            raise ConfigError("sacrifice_count must be >= 0")
        if self.two_party_mode and self.n != 2:
            raise ConfigError("two_party_mode requires n = 2")
        if not isinstance(self.attack, AttackModel):
            raise ConfigError("attack must be an AttackModel")
        if self.batch_plan is not None:
            flat = sorted(i for batch in self.batch_plan for i in batch)
            if flat != list(range(self.n)):
                raise ConfigError("batch_plan must partition the circuit indices 0..n-1")
        if self.fortunes is not None:
            if len(self.fortunes) != self.n:
                raise ConfigError(f"expected {self.n} fortunes, got {len(self.fortunes)}")
            for f in self.fortunes:
                if f.length != self.m:
                    raise ConfigError(f"fortune {f} does not have length m={self.m}")
        if self.sophia_secret is not None and self.sophia_secret.length != self.m:
            raise ConfigError("sophia_secret must have length m")

    def resolved_batch_plan(self) -> list[list[int]]:
        count = 1 if self.two_party_mode else self.n
        if self.two_party_mode or self.batch_plan is None:
            return [list(range(count))]
        return [list(batch) for batch in self.batch_plan]

    @property
    def circuit_count(self) -> int:
        return 1 if self.two_party_mode else self.n

    @classmethod
    def from_json_dict(cls, data: dict) -> ProtocolConfig:
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        extra = set(data) - _CONFIG_KEYS
        if extra:
            raise ConfigError(f"unknown config keys: {sorted(extra)}")
        for key in ("n", "m", "seed"):
            if key not in data:
                raise ConfigError(f"config is missing required key {key!r}")
        try:
            attack = AttackModel.from_json(data.get("attack"))
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        fortunes = data.get("fortunes")
        secret = data.get("sophia_secret")
        try:
            parsed_fortunes = (
                None if fortunes is None else [BitVector.from_string(f) for f in fortunes]
            )
            parsed_secret = None if secret is None else BitVector.from_string(secret)
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"bad bit string in config: {exc}") from None
        return cls(
            n=data["n"],
            m=data["m"],
            seed=data["seed"],
            decoy_rate=data.get("decoy_rate", 0.25),
            batch_plan=data.get("batch_plan"),
            attack=attack,
            two_party_mode=data.get("two_party_mode", False),
            fortunes=parsed_fortunes,
            sophia_secret=parsed_secret,
            sacrifice_count=data.get("sacrifice_count", 2),
            decoy_tolerance=data.get("decoy_tolerance", 0.0),
        )

    @classmethod
    def from_file(cls, path) -> ProtocolConfig:
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        return cls.from_json_dict(data)

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "seed": self.seed,
            "decoy_rate": self.decoy_rate,
            "batch_plan": self.batch_plan,
            "attack": self.attack.to_json(),
            "two_party_mode": self.two_party_mode,
            "fortunes": None if self.fortunes is None else [str(f) for f in self.fortunes],
            "sophia_secret": None if self.sophia_secret is None else str(self.sophia_secret),
            "sacrifice_count": self.sacrifice_count,
            "decoy_tolerance": self.decoy_tolerance,
        }


# ---------------------------------------------------------------------------
# distribution


class TripletRef:
    """Lazy handle to one GHZ triplet; created only when quantum access needs it."""

    __slots__ = ("_system",)

    def __init__(self) -> None:
        self._system: QubitSystem | None = None

    @property
    def materialized(self) -> bool:
        return self._system is not None

    def system(self) -> QubitSystem:
        if self._system is None:
            self._system = QubitSystem.ghz3()
        return self._system


@dataclass(frozen=True)
class DecoyRecord:
    """Trent's private note of one decoy: where it sits and how it was prepared."""

    seq_id: str
    position: int
    basis: str
    bit: int


@dataclass
class ChannelSlot:
    """One qubit riding a transmitted sequence.

    Data slots point at a triplet leg (materialized lazily); decoy slots own
    their single-qubit system outright.  Attack code may swap the live
    system/role for a substitute.
    """

    kind: str  # "data" | "decoy"
    role: str
    system: QubitSystem | None = None
    triplet: TripletRef | None = None
    position: int | None = None
    decoy: DecoyRecord | None = None

    def handle(self) -> tuple[QubitSystem, str]:
        if self.system is None:
            self.system = self.triplet.system()
        return self.system, self.role


@dataclass
class TransmittedSequence:
    seq_id: str
    circuit: int
    receiver: str
    slots: list[ChannelSlot]


@dataclass
class CircuitChannel:
    """Everything distributed for one comparison circuit."""

    circuit: int
    triplets: list[TripletRef]
    seq_y1: TransmittedSequence  # holder of this circuit's y1 register
    seq_y0: TransmittedSequence  # holder of this circuit's y0 register
    decoys: list[DecoyRecord]
    data_slots_y1: list[ChannelSlot]
    data_slots_y0: list[ChannelSlot]


@dataclass
class Distribution:
    channels: list[CircuitChannel]

    def all_sequences(self) -> list[TransmittedSequence]:
        seqs: list[TransmittedSequence] = []
        for ch in self.channels:
            seqs.extend((ch.seq_y1, ch.seq_y0))
        return seqs


_DECOY_STATES = (("z", 0), ("z", 1), ("x", 0), ("x", 1))


def _receivers(config: ProtocolConfig, circuit: int) -> tuple[str, str]:
    if config.two_party_mode:
        return str(alice(0)), str(alice(1))
    return str(SOPHIA), str(alice(circuit))


def distribute_entanglement(config: ProtocolConfig) -> tuple[Distribution, Transcript]:
    """Create triplets, interleave decoys, and log the quantum transmissions.

    Each transmitted sequence carries the m data legs (plus sacrificial
    ones), with ceil(decoy_rate * 2m) decoys inserted at positions only
    trent records.
    """
    transcript = Transcript()
    channels = []
    decoy_count = math.ceil(config.decoy_rate * 2 * config.m)
    for i in range(config.circuit_count):
        gen = stream(config.seed, "distribute", i)
        triplets = [TripletRef() for _ in range(config.m + config.sacrifice_count)]
        recv_y1, recv_y0 = _receivers(config, i)
        decoys: list[DecoyRecord] = []
        seqs = {}
        data_slots = {}
        for tag, receiver, leg in (("y1", recv_y1, "S"), ("y0", recv_y0, "A")):
            seq_id = f"qc{i}/{tag}"
            slots = [
                ChannelSlot(kind="data", role=leg, triplet=triplets[k], position=k)
                for k in range(len(triplets))
            ]
            positions = (
                sorted(int(p) for p in gen.choice(len(slots) + decoy_count, size=decoy_count, replace=False))
                if decoy_count
                else []
            )
            for pos in positions:
                basis, bit = _DECOY_STATES[int(gen.integers(0, 4))]
                rec = DecoyRecord(seq_id, pos, basis, bit)
                slots.insert(
                    pos,
                    ChannelSlot(
                        kind="decoy",
                        role="D",
                        system=QubitSystem.single(basis, bit),
                        decoy=rec,
                    ),
                )
                decoys.append(rec)
            seq = TransmittedSequence(seq_id, i, receiver, slots)
            transcript.transmit(TRENT, receiver, seq_id, len(slots))
            seqs[tag] = seq
            data_slots[tag] = [s for s in slots if s.kind == "data"]
        channels.append(
            CircuitChannel(
                circuit=i,
                triplets=triplets,
                seq_y1=seqs["y1"],
                seq_y0=seqs["y0"],
                decoys=decoys,
                data_slots_y1=data_slots["y1"],
                data_slots_y0=data_slots["y0"],
            )
        )
    return Distribution(channels), transcript


def decoy_check(
    distribution: Distribution, transcript: Transcript, config: ProtocolConfig
) -> DetectionStats:
    """Announce decoy positions, measure each in its preparation basis, tally.

    Positions stay private until this point; the announcements land in the
    transcript strictly after the transmission events.
    """
    total = mismatches = 0
    for ch in distribution.channels:
        for seq in (ch.seq_y1, ch.seq_y0):
            recs = [r for r in ch.decoys if r.seq_id == seq.seq_id]
            transcript.send(
                TRENT,
                seq.receiver,
                "decoy_positions",
                {
                    "seq_id": seq.seq_id,
                    "positions": [r.position for r in recs],
                    "bases": [r.basis for r in recs],
                    "bits": [r.bit for r in recs],
                },
            )
            gen = stream(config.seed, "decoy-check", seq.seq_id)
            results = []
            for r in recs:
                slot = seq.slots[r.position]
                observed = slot.system.measure_in_basis(slot.role, r.basis, gen)
                results.append(observed)
                total += 1
                mismatches += observed != r.bit
            transcript.send(
                seq.receiver,
                TRENT,
                "decoy_report",
                {"seq_id": seq.seq_id, "results": results},
            )
    error_rate = mismatches / total if total else 0.0
    passed = error_rate <= config.decoy_tolerance
    transcript.send(
        TRENT,
        "*",
        "decoy_verdict",
        {"decoys": total, "mismatches": mismatches, "passed": passed},
    )
    return DetectionStats(total, mismatches, error_rate, passed)


def validate_entanglement(
    distribution: Distribution,
    transcript: Transcript,
    config: ProtocolConfig,
    sacrifice_count: int | None = None,
) -> bool:
    """Consume sacrificial triplets: all three shares must agree in the
    computational basis.  Product-state substitutes fail half the time per
    triplet."""
    sc = config.sacrifice_count if sacrifice_count is None else sacrifice_count
    passed = True
    for ch in distribution.channels:
        available = len(ch.triplets) - config.m
        if sc > available:
            raise ValueError(f"only {available} sacrificial triplets available, need {sc}")
        gen = stream(config.seed, "validate", ch.circuit)
        outcomes = []
        for v in range(sc):
            k = config.m + v
            t_bit = ch.triplets[k].system().measure_role("T", gen)
            s_sys, s_role = ch.data_slots_y1[k].handle()
            a_sys, a_role = ch.data_slots_y0[k].handle()
            u_bit = s_sys.measure_role(s_role, gen)
            v_bit = a_sys.measure_role(a_role, gen)
            outcomes.append([t_bit, u_bit, v_bit])
            if not t_bit == u_bit == v_bit:
                passed = False
        transcript.send(
            TRENT,
            "*",
            "validation_report",
            {"circuit": ch.circuit, "outcomes": outcomes},
        )
    return passed


# ---------------------------------------------------------------------------
# quantum phase


def _position_tampered(channel: CircuitChannel, k: int) -> bool:
    ref = channel.triplets[k]
    if ref.materialized and ref.system().tampered:
        return True
    for slot in (channel.data_slots_y1[k], channel.data_slots_y0[k]):
        if slot.system is not None and slot.system.tampered:
            return True
    return False


def _measure_position_exact(channel, k: int, s_bit: int, f_bit: int, rng) -> tuple[int, int, int]:
    # The circuit factors per position: oracle CNOTs into |-> act as Z on
    # their controls, so position k sees (Z^s_k x Z^f_k), then Hadamards.
    t_sys = channel.triplets[k].system()
    s_sys, s_role = channel.data_slots_y1[k].handle()
    a_sys, a_role = channel.data_slots_y0[k].handle()
    if s_bit:
        s_sys.z(s_role)
    if f_bit:
        a_sys.z(a_role)
    t_sys.hadamard("T")
    s_sys.hadamard(s_role)
    a_sys.hadamard(a_role)
    t = t_sys.measure_role("T", rng)
    u = s_sys.measure_role(s_role, rng)
    v = a_sys.measure_role(a_role, rng)
    return t, u, v


def _circuit_outcome(
    config: ProtocolConfig,
    i: int,
    s: BitVector,
    f: BitVector,
    channel: CircuitChannel | None,
) -> MeasurementOutcome:
    gen = stream(config.seed, "qc", i)
    m = config.m
    if channel is None or not any(_position_tampered(channel, k) for k in range(m)):
        return run_qc_factored(m, s, f, gen)
    y2 = y1 = y0 = 0
    for k in range(m):
        if _position_tampered(channel, k):
            t, u, v = _measure_position_exact(channel, k, s.bit(k), f.bit(k), gen)
        else:
            t = int(gen.integers(0, 2))
            u = int(gen.integers(0, 2))
            v = t ^ u ^ s.bit(k) ^ f.bit(k)
        y2 |= t << k
        y1 |= u << k
        y0 |= v << k
    return MeasurementOutcome(BitVector(y2, m), BitVector(y1, m), BitVector(y0, m))


def run_quantum_phase(
    config: ProtocolConfig,
    fortunes: list[BitVector],
    s: BitVector,
    distribution: Distribution | None = None,
    threads: int = 1,
) -> list[MeasurementOutcome]:
    """Execute every comparison circuit, honoring the batch plan.

    Outcomes are keyed to per-circuit random streams, so any batching or
    thread count yields the identical transcript for a given seed.
    """
    if config.two_party_mode:
        pairs = [(fortunes[0], fortunes[1])]
    else:
        if len(fortunes) != config.n:
            raise ValueError(f"expected {config.n} fortunes")
        pairs = [(s, fortunes[i]) for i in range(config.n)]

    def task(i: int) -> MeasurementOutcome:
        channel = distribution.channels[i] if distribution is not None else None
        s_eff, f_eff = pairs[i]
        return _circuit_outcome(config, i, s_eff, f_eff, channel)

    results: dict[int, MeasurementOutcome] = {}
    for batch in config.resolved_batch_plan():
        if threads > 1 and len(batch) > 1:
            with ThreadPoolExecutor(max_workers=min(threads, len(batch))) as pool:
                for i, out in zip(batch, pool.map(task, batch)):
                    results[i] = out
        else:
            for i in batch:
                results[i] = task(i)
    return [results[i] for i in sorted(results)]


# ---------------------------------------------------------------------------
# classical phase


def trent_compute_sum(y2: BitVector, y1: BitVector, y0: BitVector) -> BitVector:
    """Combine the three measured registers into one encoded sum."""
    return y2 ^ y1 ^ y0


def trent_compare_all(sums: list[BitVector]) -> list[Verdict]:
    """Pairwise equality of encoded sums, lexicographic over (i, j)."""
    verdicts = []
    for i in range(len(sums)):
        for j in range(i + 1, len(sums)):
            verdicts.append(Verdict(i, j, sums[i] == sums[j]))
    return verdicts


def _abort_report(config: ProtocolConfig, reason: str, detection, transcript) -> ComparisonReport:
    return ComparisonReport(
        n=config.n,
        m=config.m,
        seed=config.seed,
        verdicts=[],
        efficiency=compute_efficiency(config.n, config.m),
        detection=detection,
        aborted=True,
        abort_reason=reason,
        transcript=transcript,
    )


def run_protocol(
    config: ProtocolConfig,
    fortunes: list[BitVector] | None = None,
    threads: int = 1,
) -> ComparisonReport:
    """One full protocol execution; aborts are reported, not raised."""
    fortunes = fortunes if fortunes is not None else config.fortunes
    if fortunes is None:
        raise ConfigError("no fortunes supplied (config.fortunes or argument)")
    expected = 2 if config.two_party_mode else config.n
    if len(fortunes) != expected:
        raise ConfigError(f"expected {expected} fortunes, got {len(fortunes)}")
    for f in fortunes:
        if f.length != config.m:
            raise ConfigError(f"fortune {f} does not have length m={config.m}")
    if config.two_party_mode:
        s = fortunes[0]  # the first millionaire's oracle plays the broker slot
    elif config.sophia_secret is not None:
        s = config.sophia_secret
    else:
        s = BitVector.random(config.m, stream(config.seed, "sophia-secret"))

    distribution, transcript = distribute_entanglement(config)
    eve = apply_attack(config.attack, distribution.all_sequences(), stream(config.seed, "eve"))
    detection = decoy_check(distribution, transcript, config)
    if not detection.passed:
        return _abort_report(config, "decoy_check", detection, transcript)
    if not validate_entanglement(distribution, transcript, config):
        return _abort_report(config, "entanglement_validation", detection, transcript)

    outcomes = run_quantum_phase(config, fortunes, s, distribution, threads)
    if eve is not None:
        finish_eavesdropping(eve, config.m, stream(config.seed, "eve-final"))

    sums: list[BitVector] = []
    if config.two_party_mode:
        out = outcomes[0]
        transcript.send(alice(0), TRENT, "register_y1", {"circuit": 0, "bits": str(out.y1)})
        transcript.send(alice(1), TRENT, "register_y0", {"circuit": 0, "bits": str(out.y0)})
        sums.append(trent_compute_sum(out.y2, out.y1, out.y0))
        verdicts = [Verdict(0, 1, sums[0].is_zero)]
    else:
        for i, out in enumerate(outcomes):
            transcript.send(SOPHIA, TRENT, "register_y1", {"circuit": i, "bits": str(out.y1)})
            transcript.send(alice(i), TRENT, "register_y0", {"circuit": i, "bits": str(out.y0)})
            sums.append(trent_compute_sum(out.y2, out.y1, out.y0))
        verdicts = trent_compare_all(sums)
    if eve is not None:
        eve.public_y1 = {i: out.y1 for i, out in enumerate(outcomes)}
        eve.public_y0 = {i: out.y0 for i, out in enumerate(outcomes)}
    transcript.send(
        TRENT,
        "*",
        "verdicts",
        [{"i": v.i, "j": v.j, "equal": v.equal} for v in verdicts],
    )
    return ComparisonReport(
        n=config.n,
        m=config.m,
        seed=config.seed,
        verdicts=verdicts,
        efficiency=compute_efficiency(config.n, config.m),
        detection=detection,
        aborted=False,
        abort_reason=None,
        trent_sums=sums,
        outcomes=outcomes,
        transcript=transcript,
        eve_record=eve,
    )


def run_two_party(
    f_a: BitVector,
    f_b: BitVector,
    config: ProtocolConfig | None = None,
    seed: int = 0,
) -> ComparisonReport:
    """Direct two-millionaire comparison; the broker drops out entirely.

    The encoded sum reduces to f_a xor f_b, so the single verdict is YES
    exactly when the sum is zero.
    """
    if f_a.length != f_b.length:
        raise ConfigError("fortunes must have equal width")
    if config is None:
        config = ProtocolConfig(n=2, m=f_a.length, seed=seed, two_party_mode=True)
    elif not config.two_party_mode:
        raise ConfigError("config must have two_party_mode set")
    return run_protocol(config, fortunes=[f_a, f_b])

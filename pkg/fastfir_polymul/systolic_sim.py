# -*- coding: utf-8 -*-
#
# This file is part of fastfir-polymul.
# Copyright (C) 2025 fastfir-polymul contributors.
#
# fastfir-polymul is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""Cycle-accurate model of the weight-stationary systolic FIR multiplier.

Tap ``j`` holds ``b[j]``. Input coefficients are broadcast MSB-first through a
fan-out buffer to every tap; tap ``j >= 1`` either takes the live sample or,
through its switch, the negated sample of the previous frame read from an
``n``-cell shift register. Products travel along a transpose-form
accumulation chain ``R_0 -> R_1 -> ... -> R_{n-2}`` and the output port
carries ``R_{n-2} + b[n-1] * operand``.

Every cycle is evaluated from the register state of the previous cycle and
then committed, so outputs at cycle ``t`` only depend on state at ``t-1``
plus the sample presented at ``t``.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import IO, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from fastfir_polymul.config import FASTFIR_RECORD_ACTIVITY
from fastfir_polymul.errors import ParameterDomainError, StreamUnderrunError
from fastfir_polymul.fast_mult import AlgorithmKind, MultAlgorithm
from fastfir_polymul.ring_core import Poly, RingParams
from fastfir_polymul.utils import ceil_log2, write_json_lines

NO_FRAME = -1
"""Frame tag of a register that holds no sample of any multiplication."""


@dataclass(frozen=True)
class Tap:
    """Snapshot of one tap.

    ``acc_register`` is the chain register ``R_j``; the last tap has no
    register and reports the value on the output port instead.
    """

    weight: int
    acc_register: int
    has_switch: bool


@dataclass(frozen=True)
class ShiftRegisterState:
    """Snapshot of the shift register, oldest sample first."""

    cells: Tuple[int, ...]


@dataclass(frozen=True)
class SwitchController:
    """Frame counter and the ``n-1`` switch control bits it drives.

    Bit ``j-1`` of ``ctrl_sw`` routes the live input to tap ``j``.
    """

    width: int
    frame_length: int
    counter: int = 0
    ctrl_sw: int = 0

    @classmethod
    def reset(cls, n: int, frame_length: Optional[int] = None) -> "SwitchController":
        """Return the controller of a length-``n`` array right after reset."""
        return cls(width=n - 1, frame_length=frame_length or n)

    def bits(self) -> Tuple[int, ...]:
        """Control bits, most significant first as in a waveform viewer."""
        return tuple((self.ctrl_sw >> bit) & 1 for bit in reversed(range(self.width)))

    def __str__(self):
        """Render the control bits as a bit string."""
        return "".join(str(bit) for bit in self.bits())


def ctrl_sw_next(controller: SwitchController) -> SwitchController:
    """Advance the switch controller by one clock.

    The counter advances modulo the frame length. On reaching 0 the control
    bits clear; otherwise they shift left with a 1 entering at the least
    significant bit.
    """
    counter = (controller.counter + 1) % controller.frame_length
    if counter == 0:
        ctrl_sw = 0
    else:
        ctrl_sw = ((controller.ctrl_sw << 1) | 1) & ((1 << controller.width) - 1)
    return SwitchController(controller.width, controller.frame_length, counter, ctrl_sw)


def fir_census(n: int) -> Dict[str, int]:
    """Component counts of a length-``n`` array."""
    return {
        "mult": n,
        "add": n - 1,
        "delay": n - 1,
        "switch": n - 1,
        "shiftreg": n,
    }


@dataclass
class Trace:
    """Per-cycle event log of a simulation.

    Each record carries ``cycle``, ``enabled``, ``phase``, ``input``,
    ``consumed`` (a sample reached the multipliers), ``output``,
    ``emitting`` (some array emitted a valid coefficient) and ``busy`` (the
    number of multipliers working on a real sample). ``active`` holds the
    per-multiplier flags when activity recording is on.
    """

    header: Dict
    records: List[Dict] = field(default_factory=list)


def write_trace(trace: Trace, stream: IO[str]) -> int:
    """Write a trace as JSON lines, header object first.

    :return: Number of lines written.
    """
    return write_json_lines(
        itertools.chain([{"header": trace.header}], trace.records), stream
    )


def measure_utilization(trace: Trace) -> float:
    """Fraction of multiplier-cycles doing useful work in steady state.

    The window runs from the first cycle in which an array emits a valid
    coefficient to the last cycle in which an input sample is consumed, both
    inclusive. Stalled cycles inside the window are idle for every
    multiplier.

    :raises ParameterDomainError: When the trace is empty or has no window.
    """
    if not trace.records:
        raise ParameterDomainError("Cannot measure the utilization of an empty trace.")
    emitting = [r["cycle"] for r in trace.records if r["emitting"]]
    consumed = [r["cycle"] for r in trace.records if r["consumed"]]
    if not emitting or not consumed or consumed[-1] < emitting[0]:
        raise ParameterDomainError("Trace has no steady-state window.")
    start, end = emitting[0], consumed[-1]
    window = [r for r in trace.records if start <= r["cycle"] <= end]
    multipliers = trace.header["census"]["mult"]
    return sum(r["busy"] for r in window) / (len(window) * multipliers)


@dataclass
class CycleReport:
    """Timing summary of one streamed run.

    ``response_time`` and ``total_latency`` count cycles from the first
    consumed input to the first and to the last output, both inclusive.
    """

    n: int
    M: int
    L: int
    response_time: int
    total_latency: int
    utilization: float
    throughput: float
    cycles: int
    census: Dict[str, int]
    trace: Optional[Trace] = field(default=None, repr=False, compare=False)

    @classmethod
    def from_trace(cls, trace: Trace, L: int) -> "CycleReport":
        """Derive the report of a completed run from its trace."""
        first_in = next(r["cycle"] for r in trace.records if r["consumed"])
        outputs = [r["cycle"] for r in trace.records if r["output"] is not None]
        n, M = trace.header["n"], trace.header["M"]
        return cls(
            n=n,
            M=M,
            L=L,
            response_time=outputs[0] - first_in + 1,
            total_latency=outputs[-1] - first_in + 1,
            utilization=measure_utilization(trace),
            throughput=n * L / (outputs[-1] - outputs[0] + 1),
            cycles=len(trace.records),
            census=dict(trace.header["census"]),
            trace=trace,
        )

    def latency_us(self, frequency_mhz: float) -> float:
        """Total latency in microseconds at the given clock frequency."""
        if frequency_mhz <= 0:
            raise ParameterDomainError(
                f"Clock frequency must be positive, got {frequency_mhz} MHz."
            )
        return self.total_latency / frequency_mhz

    def to_dict(self) -> Dict:
        """Return the JSON report object."""
        return {
            "response_time": self.response_time,
            "total_latency": self.total_latency,
            "utilization": self.utilization,
            "throughput": self.throughput,
            "L": self.L,
            "n": self.n,
            "M": self.M,
            "census": dict(self.census),
        }


class ArraySim:
    """Register state of one systolic FIR array.

    An instance is owned by one caller at a time. Every register carries the
    frame tag of the multiplication its sample belongs to, so that valid
    outputs can be told apart from the ones computed on empty registers.

    :param strict_stream: Raise :class:`StreamUnderrunError` when the input
        stream ends mid-frame or is clocked empty with nothing pending.
        Arrays embedded in a larger datapath leave the check to their owner.
    """

    def __init__(
        self,
        params: RingParams,
        B: Poly,
        record_activity: Optional[bool] = None,
        strict_stream: bool = True,
        keep_trace: bool = True,
    ):
        """Load ``B`` into the taps and reset every register."""
        n = params.n
        self.params = params
        self.weights = B.as_array()
        self.buffer = np.zeros(n, dtype=params.dtype)
        self.buffer_frames = np.full(n, NO_FRAME, dtype=np.int64)
        self.buffer_input_frame = NO_FRAME
        self.chain = np.zeros(max(n - 1, 0), dtype=params.dtype)
        self.output_port = 0
        self.shift_cells = np.zeros(n, dtype=params.dtype)
        self.shift_frames = np.full(n, NO_FRAME, dtype=np.int64)
        self._shift_head = 0
        self._tap_index = np.arange(n)
        self.controller = SwitchController.reset(n)
        self.cycle = 0
        self.frames_started = 0
        self.outputs_emitted = 0
        self.outputs: Dict[int, List[int]] = {}
        self.last_output_frame = NO_FRAME
        self.last_busy_flags = np.zeros(n, dtype=bool)
        self.strict_stream = strict_stream
        self.keep_trace = keep_trace
        self.record_activity = (
            FASTFIR_RECORD_ACTIVITY if record_activity is None else record_activity
        )
        self._feeding = False
        self._draining = False
        self.trace = Trace(
            header={
                "kind": "fir",
                "n": n,
                "q": params.q,
                "M": 1,
                "census": fir_census(n),
            }
        )

    @property
    def taps(self) -> Tuple[Tap, ...]:
        """Snapshot of every tap."""
        n = self.params.n
        registers = [int(r) for r in self.chain] + [int(self.output_port)]
        return tuple(
            Tap(weight=int(self.weights[j]), acc_register=registers[j], has_switch=j >= 1)
            for j in range(n)
        )

    @property
    def shift_reg(self) -> ShiftRegisterState:
        """Snapshot of the shift register."""
        return ShiftRegisterState(
            tuple(int(c) for c in np.roll(self.shift_cells, -self._shift_head))
        )

    @property
    def pending_outputs(self) -> int:
        """Output coefficients still owed for the frames fed so far."""
        return self.frames_started * self.params.n - self.outputs_emitted

    def _accept(self, sample: Optional[int]) -> int:
        phase = self.controller.counter
        if sample is None:
            if self.strict_stream:
                if self._feeding and phase != 0:
                    raise StreamUnderrunError(
                        f"Input stream ended in the middle of a frame at cycle "
                        f"{self.cycle} (phase {phase} of {self.params.n})."
                    )
                if self.pending_outputs == 0:
                    raise StreamUnderrunError(
                        f"Clocked an exhausted stream with no pending outputs "
                        f"at cycle {self.cycle}."
                    )
            if self._feeding:
                self._feeding, self._draining = False, True
            return NO_FRAME
        if self._draining:
            raise ParameterDomainError(
                "Cannot feed new samples into a draining array; build a new one."
            )
        if isinstance(sample, bool) or not 0 <= sample < self.params.q:
            raise ParameterDomainError(
                f"coefficient out of range: sample {sample!r} is not in "
                f"[0, {self.params.q})."
            )
        if phase == 0:
            self.frames_started += 1
        self._feeding = True
        return self.frames_started - 1

    def step(self, sample: Optional[int] = None, enable: bool = True) -> Optional[int]:
        """Advance one clock.

        :param sample: Input coefficient presented this cycle, ``None`` to
            drain the array.
        :param enable: Clock enable; a disabled cycle holds every register.
        :return: The output coefficient emitted this cycle, if valid.
        """
        if not enable:
            self.last_output_frame = NO_FRAME
            self.last_busy_flags = np.zeros(self.params.n, dtype=bool)
            self._record(
                enabled=False,
                phase=self.controller.counter,
                sample=None,
                consumed=False,
                output=None,
                busy_flags=None,
            )
            self.cycle += 1
            return None

        frame = self._accept(sample)
        reduce = self.params.reduce
        n = self.params.n

        # evaluate
        products = reduce(self.weights * self.buffer)
        if n == 1:
            output = products[0]
            chain = self.chain
        else:
            output = reduce(self.chain[-1] + products[-1])
            chain = np.empty_like(self.chain)
            chain[0] = products[0]
            chain[1:] = reduce(self.chain[:-1] + products[1:-1])
        output_frame = int(self.buffer_frames[-1])
        busy_flags = self.buffer_frames != NO_FRAME
        consumed = self.buffer_input_frame != NO_FRAME

        # present: ctrl_sw is always a run of low ones
        phase = self.controller.counter
        live = self._tap_index <= self.controller.ctrl_sw.bit_length()
        value = 0 if sample is None else int(sample)
        shift_value = self.shift_cells[self._shift_head]
        shift_frame = self.shift_frames[self._shift_head]
        buffer = np.where(live, value, reduce(-shift_value)).astype(self.params.dtype)
        buffer_frames = np.where(live, frame, shift_frame).astype(np.int64)

        # commit
        self.chain = chain
        self.output_port = output
        self.buffer, self.buffer_frames = buffer, buffer_frames
        self.buffer_input_frame = frame
        self.shift_cells[self._shift_head] = value
        self.shift_frames[self._shift_head] = frame
        self._shift_head = (self._shift_head + 1) % n
        self.controller = ctrl_sw_next(self.controller)
        self.last_output_frame = output_frame
        self.last_busy_flags = busy_flags

        emitted = None
        if output_frame != NO_FRAME:
            emitted = int(output)
            self.outputs.setdefault(output_frame, []).append(emitted)
            self.outputs_emitted += 1
        self._record(
            enabled=True,
            phase=phase,
            sample=sample,
            consumed=consumed,
            output=emitted,
            busy_flags=busy_flags,
        )
        self.cycle += 1
        return emitted

    def _record(self, enabled, phase, sample, consumed, output, busy_flags):
        if not self.keep_trace:
            return
        record = {
            "cycle": self.cycle,
            "enabled": enabled,
            "phase": int(phase),
            "input": None if sample is None else int(sample),
            "consumed": bool(consumed),
            "output": output,
            "emitting": output is not None,
            "busy": 0 if busy_flags is None else int(busy_flags.sum()),
        }
        if self.record_activity:
            record["active"] = (
                [False] * self.params.n
                if busy_flags is None
                else [bool(flag) for flag in busy_flags]
            )
        self.trace.records.append(record)

    def completed_polys(self) -> List[Poly]:
        """Output polynomials of every frame that has been fully emitted."""
        n = self.params.n
        return [
            Poly(self.params, list(reversed(values)))
            for _, values in sorted(self.outputs.items())
            if len(values) == n
        ]


def build_fir_array(
    params: RingParams,
    B: Poly,
    record_activity: Optional[bool] = None,
    strict_stream: bool = True,
) -> ArraySim:
    """Build an array whose tap ``j`` holds ``b[j]``.

    :raises ParameterDomainError: When ``B`` is not an element of ``params``.
    """
    if B.params != params:
        raise ParameterDomainError(
            f"Weight polynomial has length {B.params.n} modulo {B.params.q}, "
            f"expected length {params.n} modulo {params.q}."
        )
    return ArraySim(params, B, record_activity=record_activity, strict_stream=strict_stream)


def clock_step(
    sim: ArraySim, input_sample: Optional[int] = None, enable: bool = True
) -> Tuple[ArraySim, Optional[int]]:
    """Advance ``sim`` by one clock and return it with the emitted output."""
    output = sim.step(input_sample, enable=enable)
    return sim, output


def check_stream(params: RingParams, As: Sequence[Poly], stall_before):
    if not As:
        raise ParameterDomainError("Cannot stream an empty sequence of polynomials.")
    for index, A in enumerate(As):
        if A.params != params:
            raise ParameterDomainError(
                f"Input polynomial {index} has length {A.params.n} modulo "
                f"{A.params.q}, expected length {params.n} modulo {params.q}."
            )
    stall_before = dict(stall_before or {})
    for frame, cycles in stall_before.items():
        if not 0 <= frame < len(As) or cycles < 0:
            raise ParameterDomainError(
                f"Invalid stall of {cycles} cycles before frame {frame} "
                f"of a {len(As)}-frame stream."
            )
    return stall_before


def run_stream(
    params: RingParams,
    B: Poly,
    As: Sequence[Poly],
    stall_before: Optional[Mapping[int, int]] = None,
    record_activity: Optional[bool] = None,
) -> Tuple[List[Poly], CycleReport]:
    """Stream ``As`` back-to-back through an array loaded with ``B``.

    :param stall_before: Frame index to number of clock-gated cycles inserted
        right before that frame's first sample.
    :return: The products ``A_i * B`` in stream order and the timing report.
    :raises ParameterDomainError: When the stream is empty or mixes rings.
    """
    stalls = check_stream(params, As, stall_before)
    sim = build_fir_array(params, B, record_activity=record_activity)
    for index, A in enumerate(As):
        for _ in range(stalls.get(index, 0)):
            sim.step(enable=False)
        for coeff in reversed(A.coeffs):
            sim.step(coeff)
        logging.debug("Frame {} fed by cycle {}.".format(index, sim.cycle - 1))
    while sim.pending_outputs:
        sim.step(None)
    outputs = sim.completed_polys()
    report = CycleReport.from_trace(sim.trace, len(As))
    logging.info(
        "FIR array n={}: {} multiplications, response time {}, "
        "total latency {} cycles.".format(
            params.n, len(As), report.response_time, report.total_latency
        )
    )
    return outputs, report


def predicted_latency(
    arch: Union[MultAlgorithm, str], n: int, L: int, M: Optional[int] = None
) -> int:
    """Closed-form total latency of ``L`` streamed multiplications.

    ``n(L+1) - 1`` for the FIR array and ``n(1+L)/M + ceil(log2 M)`` for the
    fast ``M``-parallel datapaths.

    :raises ParameterDomainError: For untimed algorithms or invalid sizes.
    """
    algorithm = arch if isinstance(arch, MultAlgorithm) else MultAlgorithm.parse(arch)
    if n < 1 or L < 1:
        raise ParameterDomainError(f"Need n >= 1 and L >= 1, got n={n}, L={L}.")
    if algorithm.kind == AlgorithmKind.SCHOOLBOOK:
        if M not in (None, 1):
            raise ParameterDomainError(f"The FIR array is 1-parallel, got M={M}.")
        return n * (L + 1) - 1
    if not algorithm.is_fast:
        raise ParameterDomainError(f"{algorithm.label} has no timed datapath.")
    if M is not None and M != algorithm.M:
        raise ParameterDomainError(f"{algorithm.label} is {algorithm.M}-parallel, got M={M}.")
    if n % algorithm.M:
        raise ParameterDomainError(f"M={algorithm.M} does not divide n={n}.")
    return n * (1 + L) // algorithm.M + ceil_log2(algorithm.M)


def correct_switch_schedule(n: int) -> List[Tuple[bool, ...]]:
    """Per-phase live-input flags of taps ``1..n-1`` required for correctness.

    At frame phase ``t`` tap ``j`` contributes to the output ``j`` positions
    earlier in the stream; that output belongs to the current frame iff
    ``t >= j``, otherwise it needs the negated sample of the previous frame.
    """
    return [tuple(t >= j for j in range(1, n)) for t in range(n)]


def scheduling_matches_controller(n: int, frame_length: Optional[int] = None) -> bool:
    """Check the controller against the correctness-derived switch schedule.

    The controller is run for two frames of ``n`` cycles; every phase whose
    switch setting differs from :func:`correct_switch_schedule` is logged.

    :param frame_length: Counter modulus, ``n`` unless overridden.
    """
    expected = correct_switch_schedule(n)
    controller = SwitchController.reset(n, frame_length)
    matches = True
    for cycle in range(2 * n):
        live = tuple(bool((controller.ctrl_sw >> (j - 1)) & 1) for j in range(1, n))
        if live != expected[cycle % n]:
            matches = False
            required = "".join("1" if flag else "0" for flag in reversed(expected[cycle % n]))
            logging.warning(
                "Switch schedule mismatch for n={} at cycle {}: controller {} "
                "(counter {}), required {}.".format(
                    n, cycle, controller, controller.counter, required
                )
            )
        controller = ctrl_sw_next(controller)
    return matches

# -*- coding: utf-8 -*-
#
# This file is part of fastfir-polymul.
# Copyright (C) 2025 fastfir-polymul contributors.
#
# fastfir-polymul is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""Cycle-accurate model of the fast M-parallel datapaths.

A datapath for factorization ``F`` takes ``M = prod(F)`` input lanes per
cycle; lane ``r`` carries the polyphase part ``A_r`` MSB-first, so a frame
lasts ``S = n/M`` cycles. Radix-2 and radix-3 stages wrap leaf systolic
arrays of length ``S`` with combinational pre-adders and registered
post-processing:

* every leaf output passes one pipeline register;
* a radix-2 stage delays ``U`` (and the low lanes of ``V``) one cycle so that
  ``V*y`` becomes causal, and delays ``P1`` by one cycle to stay aligned;
* a radix-3 stage registers its sub-products and then its ``D`` terms, one
  cycle each, because both ``D2`` and ``P0`` need a shift by ``y``.

The shift by ``y`` of a lane vector rotates its lanes up by one. Lane 0
takes the top lane of the next block; for block 0 it takes the negated top
lane captured one frame earlier from the wrap hold register.
"""

import logging
from collections import Counter
from typing import Dict, Iterator, List, Mapping, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from fastfir_polymul.config import FASTFIR_RECORD_ACTIVITY, MAX_PARALLEL_RADIX3_STAGES
from fastfir_polymul.errors import (
    DecompositionError,
    ParameterDomainError,
    StreamUnderrunError,
)
from fastfir_polymul.fast_mult import MultAlgorithm
from fastfir_polymul.ring_core import Poly, RingParams, poly_add, polyphase_split
from fastfir_polymul.systolic_sim import (
    NO_FRAME,
    CycleReport,
    Trace,
    build_fir_array,
    check_stream,
    fir_census,
)


class Lanes(NamedTuple):
    """Lane vector moving through the datapath, tagged with its frame."""

    values: np.ndarray
    frame: int


def _idle(lanes: int, dtype) -> Lanes:
    return Lanes(np.zeros(lanes, dtype=dtype), NO_FRAME)


class WrapShift:
    """Multiplication by ``y`` of a lane stream, with its wrap hold register.

    ``phase`` is the frame step of the current (undelayed) input, counted
    from the first valid vector. At phase 0 the current vector is the first
    block of a frame: its top lane is captured, and the delayed vector is
    block 0 of the previous frame, which takes the negated hold.
    """

    def __init__(self, steps: int):
        """Create an empty hold register for frames of ``steps`` cycles."""
        self.steps = steps
        self.hold = 0
        self.phase: Optional[int] = None

    def observe(self, current: Lanes):
        """Start counting at the first valid input."""
        if self.phase is None and current.frame != NO_FRAME:
            self.phase = 0

    def shifted(self, delayed: Lanes, current: Lanes) -> np.ndarray:
        """Return ``delayed * y`` lane by lane, unreduced."""
        top = -self.hold if self.phase == 0 else current.values[-1]
        values = np.empty_like(delayed.values)
        values[0] = top
        values[1:] = delayed.values[:-1]
        return values

    def commit(self, current: Lanes):
        """Capture the hold register and advance the frame step."""
        if self.phase == 0:
            self.hold = current.values[-1]
        if self.phase is not None:
            self.phase = (self.phase + 1) % self.steps


class LeafFilter:
    """Systolic array of length ``S`` followed by one pipeline register."""

    lanes = 1

    def __init__(self, B: Poly):
        """Load the leaf weights."""
        self.array = build_fir_array(
            B.params, B, record_activity=False, strict_stream=False
        )
        self.register = _idle(1, B.params.dtype)

    def step(self, inputs: Lanes, enable: bool) -> Lanes:
        """Return the registered output and clock the array."""
        output = self.register
        if not enable:
            self.array.step(enable=False)
            return output
        sample = None if inputs.frame == NO_FRAME else int(inputs.values[0])
        value = self.array.step(sample)
        self.register = Lanes(
            np.array([value or 0], dtype=self.array.params.dtype),
            self.array.last_output_frame,
        )
        return output

    def leaves(self) -> Iterator["LeafFilter"]:
        """Yield this leaf."""
        yield self

    def census(self) -> Counter:
        """Component counts of the array and its pipeline register."""
        counts = Counter(fir_census(self.array.params.n))
        counts.update({"sub_multipliers": 1, "pipeline_registers": 1})
        return counts


class Radix2Stage:
    """Fast two-parallel stage around sub-datapaths for ``U``, ``V`` and ``W``."""

    def __init__(self, children, params: RingParams, steps: int):
        """Wire the ``U``, ``V`` and ``W`` children."""
        self.children = children
        self.params = params
        self.child_lanes = children[0].lanes
        self.lanes = 2 * self.child_lanes
        self.u_reg = _idle(self.child_lanes, params.dtype)
        self.v_reg = _idle(self.child_lanes, params.dtype)
        self.p1_reg = _idle(self.child_lanes, params.dtype)
        self.shift = WrapShift(steps)

    def step(self, inputs: Lanes, enable: bool) -> Lanes:
        """Clock the stage, returning ``(P0, P1)`` interleaved by lane."""
        reduce = self.params.reduce
        a0, a1 = inputs.values[0::2], inputs.values[1::2]
        child_inputs = (a0, a1, reduce(a0 + a1))
        u, v, w = (
            child.step(Lanes(values, inputs.frame), enable)
            for child, values in zip(self.children, child_inputs)
        )
        if not enable:
            return _idle(self.lanes, self.params.dtype)

        self.shift.observe(v)
        output = np.empty(self.lanes, dtype=self.params.dtype)
        output[0::2] = reduce(self.u_reg.values + self.shift.shifted(self.v_reg, v))
        output[1::2] = self.p1_reg.values
        result = Lanes(output, self.u_reg.frame)

        self.shift.commit(v)
        self.u_reg, self.v_reg = u, v
        self.p1_reg = Lanes(reduce(w.values - u.values - v.values), w.frame)
        return result

    def leaves(self) -> Iterator[LeafFilter]:
        """Yield the leaves of every child."""
        for child in self.children:
            yield from child.leaves()

    def census(self) -> Counter:
        """Component counts of the stage and its children."""
        counts = Counter()
        for child in self.children:
            counts.update(child.census())
        m = self.child_lanes
        counts.update(
            {
                "addsub": 4 * m,
                "weight_adders": m,
                "u_delays": m,
                "v_delays": m - 1,
                "alignment_delays": m,
                "wrap_switches": 2,
                "wrap_delays": 1,
            }
        )
        return counts


class Radix3Stage:
    """Fast three-parallel stage around six sub-datapaths ``C0..C5``."""

    def __init__(self, children, params: RingParams, steps: int):
        """Wire six children of equal lane count."""
        self.children = children
        self.params = params
        self.child_lanes = children[0].lanes
        self.lanes = 3 * self.child_lanes
        self.c_regs = [_idle(self.child_lanes, params.dtype) for _ in range(6)]
        self.d_regs = [_idle(self.child_lanes, params.dtype) for _ in range(4)]
        self.c2_shift = WrapShift(steps)
        self.d1_shift = WrapShift(steps)

    def step(self, inputs: Lanes, enable: bool) -> Lanes:
        """Clock the stage, returning ``(P0, P1, P2)`` interleaved by lane."""
        reduce = self.params.reduce
        a0, a1, a2 = inputs.values[0::3], inputs.values[1::3], inputs.values[2::3]
        s01 = reduce(a0 + a1)
        child_inputs = (a0, a1, a2, s01, reduce(a1 + a2), reduce(s01 + a2))
        c = [
            child.step(Lanes(values, inputs.frame), enable)
            for child, values in zip(self.children, child_inputs)
        ]
        if not enable:
            return _idle(self.lanes, self.params.dtype)

        c0, c1, c2, c3, c4, c5 = self.c_regs
        self.c2_shift.observe(c[2])
        frame = c0.frame
        d_now = [
            Lanes(reduce(c3.values - c1.values), frame),
            Lanes(reduce(c4.values - c1.values), frame),
            Lanes(reduce(c0.values - self.c2_shift.shifted(c2, c[2])), frame),
            c5,
        ]

        d0, d1, d2, d3 = self.d_regs
        self.d1_shift.observe(d_now[1])
        output = np.empty(self.lanes, dtype=self.params.dtype)
        output[0::3] = reduce(d2.values + self.d1_shift.shifted(d1, d_now[1]))
        output[1::3] = reduce(d0.values - d2.values)
        output[2::3] = reduce(d3.values - d0.values - d1.values)
        result = Lanes(output, d2.frame)

        self.c2_shift.commit(c[2])
        self.d1_shift.commit(d_now[1])
        self.c_regs = c
        self.d_regs = d_now
        return result

    def leaves(self) -> Iterator[LeafFilter]:
        """Yield the leaves of every child."""
        for child in self.children:
            yield from child.leaves()

    def census(self) -> Counter:
        """Component counts of the stage and its children.

        ``addsub`` counts the operand and weight pre-adders together with the
        post-processing adders; ``stream_addsub`` leaves the weight side out.
        """
        counts = Counter()
        for child in self.children:
            counts.update(child.census())
        m = self.child_lanes
        counts.update(
            {
                "addsub": 13 * m,
                "stream_addsub": 10 * m,
                "weight_adders": 3 * m,
                "post_registers": 10 * m,
                "wrap_switches": 4,
                "wrap_delays": 2,
            }
        )
        return counts


def _build_stage(B: Poly, factors: Tuple[int, ...], steps: int):
    if not factors:
        return LeafFilter(B)
    rest = factors[1:]
    if factors[0] == 2:
        b0, b1 = polyphase_split(B, 2).parts
        weights = (b0, b1, poly_add(b0, b1))
        children = [_build_stage(W, rest, steps) for W in weights]
        return Radix2Stage(children, B.params, steps)
    b0, b1, b2 = polyphase_split(B, 3).parts
    b01 = poly_add(b0, b1)
    weights = (b0, b1, b2, b01, poly_add(b1, b2), poly_add(b01, b2))
    children = [_build_stage(W, rest, steps) for W in weights]
    return Radix3Stage(children, B.params, steps)


class ParallelSim:
    """Composite fast M-parallel datapath with its stream controller.

    The stream rules match :class:`~fastfir_polymul.systolic_sim.ArraySim`:
    blocks of ``M`` coefficients are fed MSB-first, ``None`` drains, and a
    disabled cycle holds every register.
    """

    def __init__(
        self,
        params: RingParams,
        B: Poly,
        algorithm: MultAlgorithm,
        record_activity: Optional[bool] = None,
    ):
        """Build the stage tree for ``algorithm.factorization``."""
        self.params = params
        self.algorithm = algorithm
        self.M = algorithm.M
        self.steps = params.n // self.M
        self.root = _build_stage(B, algorithm.factorization, self.steps)
        self.leaf_filters = list(self.root.leaves())
        self.record_activity = (
            FASTFIR_RECORD_ACTIVITY if record_activity is None else record_activity
        )
        self.cycle = 0
        self.phase = 0
        self.frames_started = 0
        self.blocks_emitted = 0
        self.outputs: Dict[int, List[List[int]]] = {}
        self._presented_frame = NO_FRAME
        self._feeding = False
        self._draining = False
        census = dict(self.root.census())
        self.trace = Trace(
            header={
                "kind": "fast-parallel",
                "factorization": list(algorithm.factorization),
                "n": params.n,
                "q": params.q,
                "M": self.M,
                "census": census,
            }
        )

    @property
    def census(self) -> Dict[str, int]:
        """Component counts of the whole datapath."""
        return self.trace.header["census"]

    @property
    def pending_outputs(self) -> int:
        """Output blocks still owed for the frames fed so far."""
        return self.frames_started * self.steps - self.blocks_emitted

    def _accept(self, block: Optional[Sequence[int]]) -> int:
        if block is None:
            if self._feeding and self.phase != 0:
                raise StreamUnderrunError(
                    f"Input stream ended in the middle of a frame at cycle "
                    f"{self.cycle} (step {self.phase} of {self.steps})."
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
                "Cannot feed new samples into a draining datapath; build a new one."
            )
        if len(block) != self.M:
            raise ParameterDomainError(f"Expected {self.M} lanes, got {len(block)}.")
        for sample in block:
            if not 0 <= sample < self.params.q:
                raise ParameterDomainError(
                    f"coefficient out of range: sample {sample!r} is not in "
                    f"[0, {self.params.q})."
                )
        if self.phase == 0:
            self.frames_started += 1
        self._feeding = True
        return self.frames_started - 1

    def step(self, block: Optional[Sequence[int]] = None, enable: bool = True):
        """Advance one clock.

        :param block: The ``M`` coefficients presented this cycle, lowest
            lane first, or ``None`` to drain.
        :param enable: Clock enable.
        :return: The ``M`` output coefficients of this cycle, if valid.
        """
        if not enable:
            self.root.step(_idle(self.M, self.params.dtype), False)
            self._record(False, None, False, None, False, None)
            self.cycle += 1
            return None

        frame = self._accept(block)
        values = np.zeros(self.M, dtype=self.params.dtype)
        if block is not None:
            values[:] = [int(sample) for sample in block]
        consumed = self._presented_frame != NO_FRAME
        output = self.root.step(Lanes(values, frame), True)
        self._presented_frame = frame
        phase = self.phase
        self.phase = (self.phase + 1) % self.steps

        emitting = any(
            leaf.array.last_output_frame != NO_FRAME for leaf in self.leaf_filters
        )
        busy_flags = [leaf.array.last_busy_flags for leaf in self.leaf_filters]
        emitted = None
        if output.frame != NO_FRAME:
            emitted = [int(v) for v in output.values]
            self.outputs.setdefault(output.frame, []).append(emitted)
            self.blocks_emitted += 1
        self._record(True, block, consumed, emitted, emitting, busy_flags, phase)
        self.cycle += 1
        return emitted

    def _record(self, enabled, block, consumed, output, emitting, busy_flags, phase=None):
        record = {
            "cycle": self.cycle,
            "enabled": enabled,
            "phase": self.phase if phase is None else phase,
            "input": None if block is None else [int(v) for v in block],
            "consumed": bool(consumed),
            "output": output,
            "emitting": bool(emitting),
            "busy": 0 if busy_flags is None else int(sum(f.sum() for f in busy_flags)),
        }
        if self.record_activity:
            record["active"] = (
                [False] * self.census["mult"]
                if busy_flags is None
                else [bool(flag) for flags in busy_flags for flag in flags]
            )
        self.trace.records.append(record)

    def completed_polys(self) -> List[Poly]:
        """Output polynomials of every frame that has been fully emitted."""
        polys = []
        for _, blocks in sorted(self.outputs.items()):
            if len(blocks) == self.steps:
                coeffs = [c for block in reversed(blocks) for c in block]
                polys.append(Poly(self.params, coeffs))
        return polys


def build_fast_parallel_sim(
    params: RingParams,
    B: Poly,
    factorization: Sequence[int],
    record_activity: Optional[bool] = None,
) -> ParallelSim:
    """Build the fast datapath for ``factorization``, outermost factor first.

    :raises DecompositionError: When ``M`` does not divide ``n`` or the
        factorization iterates more than two radix-3 stages.
    :raises ParameterDomainError: For factors other than 2 and 3, or when
        ``B`` is not an element of ``params``.
    """
    algorithm = MultAlgorithm.fast(factorization)
    if B.params != params:
        raise ParameterDomainError(
            f"Weight polynomial has length {B.params.n} modulo {B.params.q}, "
            f"expected length {params.n} modulo {params.q}."
        )
    if params.n % algorithm.M:
        raise DecompositionError(f"M={algorithm.M} does not divide n={params.n}.")
    radix3_stages = algorithm.factorization.count(3)
    if radix3_stages > MAX_PARALLEL_RADIX3_STAGES:
        raise DecompositionError(
            f"{algorithm.label} iterates {radix3_stages} radix-3 stages, "
            f"at most {MAX_PARALLEL_RADIX3_STAGES} are supported."
        )
    return ParallelSim(params, B, algorithm, record_activity=record_activity)


def run_parallel_stream(
    sim: ParallelSim,
    As: Sequence[Poly],
    stall_before: Optional[Mapping[int, int]] = None,
) -> Tuple[List[Poly], CycleReport]:
    """Stream ``As`` back-to-back through a fresh fast datapath.

    :return: The products in stream order and the timing report.
    :raises ParameterDomainError: When the stream is empty or mixes rings.
    """
    stalls = check_stream(sim.params, As, stall_before)
    M, steps = sim.M, sim.steps
    for index, A in enumerate(As):
        for _ in range(stalls.get(index, 0)):
            sim.step(enable=False)
        for k in reversed(range(steps)):
            sim.step(A.coeffs[k * M : (k + 1) * M])
    while sim.pending_outputs:
        sim.step(None)
    outputs = sim.completed_polys()
    report = CycleReport.from_trace(sim.trace, len(As))
    logging.info(
        "{} datapath n={}: {} multiplications, total latency {} cycles, "
        "throughput {:g} coefficients per cycle.".format(
            sim.algorithm.label,
            sim.params.n,
            len(As),
            report.total_latency,
            report.throughput,
        )
    )
    return outputs, report

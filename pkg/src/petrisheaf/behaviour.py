"""Markings, firing, reachability, and behaviour transport along morphisms.

Markings are vectors over the token axis of a net.  An event is a pair of a
transition and a non-negative multiset of its bindings fired at once; a
plain firing uses a unit multiset.  Sequences of single-binding events can
be pushed through a verified morphism once they are saturated: every
maximal run of events sitting over one image transition must have a Parikh
vector that is a flow of the corresponding fibre.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from .topology import Sort


class BehaviourError(ValueError):
    """Bad marking or event data, or firing a disabled event."""


# ---------------------------------------------------------------------------
# markings and events


def zero_marking(net):
    return tuple(0 for _ in net.token_axis())


def marking_vector(net, data):
    """Normalise dict or sequence input to a marking tuple.

    Dict keys are (place, token) labels; values must be non-negative and
    may be fractional (transported markings can leave the integers).
    """
    axis = net.token_axis()
    if isinstance(data, dict):
        extra = set(data) - set(axis)
        if extra:
            raise BehaviourError(f"unknown tokens {sorted(extra, key=str)!r}")
        values = [data.get(lab, 0) for lab in axis]
    else:
        values = list(data)
        if len(values) != len(axis):
            raise BehaviourError(
                f"marking must have length {len(axis)}, got {len(values)}"
            )
    out = []
    for v in values:
        f = Fraction(v)
        if f < 0:
            raise BehaviourError(f"negative token count {v!r}")
        out.append(int(f) if f.denominator == 1 else f)
    return tuple(out)


def marking_dict(net, vector):
    """Sparse view of a marking vector, keyed by (place, token)."""
    axis = net.token_axis()
    if len(vector) != len(axis):
        raise BehaviourError("marking has the wrong length")
    return {lab: v for lab, v in zip(axis, vector) if v}


def event_vector(net, t, data):
    """Multiset of bindings of ``t``: a binding name, dict, or vector."""
    if t not in net.bindings:
        raise BehaviourError(f"unknown transition {t!r}")
    axis = net.bindings[t]
    if isinstance(data, str):
        if data not in axis:
            raise BehaviourError(f"unknown binding {t}.{data}")
        return tuple(1 if b == data else 0 for b in axis)
    if isinstance(data, dict):
        extra = set(data) - set(axis)
        if extra:
            raise BehaviourError(f"unknown bindings {sorted(extra)!r} of {t!r}")
        values = [data.get(b, 0) for b in axis]
    else:
        values = list(data)
        if len(values) != len(axis):
            raise BehaviourError(f"event over {t!r} must have length {len(axis)}")
    for v in values:
        if v < 0 or v != int(v):
            raise BehaviourError(f"binding multiplicities must be naturals, got {v!r}")
    return tuple(int(v) for v in values)


def _event_effect(net, t, vec, kind):
    axis = net.token_axis()
    out = [0] * len(axis)
    for mult, b in zip(vec, net.bindings[t]):
        if not mult:
            continue
        for i, (p, c) in enumerate(axis):
            w = net.w_minus(t, b, p, c) if kind == "minus" else net.w_plus(t, b, p, c)
            if w:
                out[i] += mult * w
    return out


def is_enabled(net, marking, t, data):
    vec = event_vector(net, t, data)
    need = _event_effect(net, t, vec, "minus")
    return all(m >= n for m, n in zip(marking, need))


def fire(net, marking, t, data):
    """Fire a binding multiset of ``t``; raises when not enabled."""
    vec = event_vector(net, t, data)
    need = _event_effect(net, t, vec, "minus")
    if not all(m >= n for m, n in zip(marking, need)):
        raise BehaviourError(f"event over {t!r} is not enabled")
    gain = _event_effect(net, t, vec, "plus")
    return tuple(m - n + g for m, n, g in zip(marking, need, gain))


def fire_step(net, marking, events):
    """Fire several events concurrently (their pre-sets must fit at once)."""
    need = [0] * len(marking)
    gain = [0] * len(marking)
    for t, data in events:
        vec = event_vector(net, t, data)
        for i, v in enumerate(_event_effect(net, t, vec, "minus")):
            need[i] += v
        for i, v in enumerate(_event_effect(net, t, vec, "plus")):
            gain[i] += v
    if not all(m >= n for m, n in zip(marking, need)):
        raise BehaviourError("step is not enabled")
    return tuple(m - n + g for m, n, g in zip(marking, need, gain))


def fire_sequence(net, marking, events):
    """Fire events one after another; returns (final, intermediate trace)."""
    trace = [tuple(marking)]
    current = tuple(marking)
    for t, data in events:
        current = fire(net, current, t, data)
        trace.append(current)
    return current, trace


def enabled_events(net, marking):
    """All enabled single-binding events, in declaration order."""
    out = []
    for t in net.space.transitions:
        for b in net.bindings[t]:
            if is_enabled(net, marking, t, b):
                out.append((t, b))
    return out


def activated_sequences(net, marking, max_length):
    """All activated single-binding sequences up to the given length.

    Yields tuples of (transition, binding) pairs, shortest first; the empty
    sequence is included.
    """
    queue = deque([((), tuple(marking))])
    while queue:
        events, current = queue.popleft()
        yield events
        if len(events) == max_length:
            continue
        for t, b in enabled_events(net, current):
            queue.append((events + ((t, b),), fire(net, current, t, b)))


# ---------------------------------------------------------------------------
# reachability


@dataclass
class ReachResult:
    initial: tuple
    markings: set
    edges: list = field(default_factory=list)  # (marking, (t, b), marking)
    truncated: bool = False
    depth_reached: int = 0

    def __len__(self):
        return len(self.markings)


def reachable(net, marking, depth=None, max_states=10_000, record_edges=False):
    """Breadth-first reachability with single-binding steps.

    Exploration stops at the depth bound and at ``max_states`` distinct
    markings; hitting either limit before exhaustion sets ``truncated``.
    """
    start = tuple(marking)
    seen = {start}
    result = ReachResult(initial=start, markings=seen)
    queue = deque([(start, 0)])
    while queue:
        current, d = queue.popleft()
        result.depth_reached = max(result.depth_reached, d)
        if depth is not None and d >= depth:
            if enabled_events(net, current):
                result.truncated = True
            continue
        for t, b in enabled_events(net, current):
            nxt = fire(net, current, t, b)
            if record_edges:
                result.edges.append((current, (t, b), nxt))
            if nxt in seen:
                continue
            if len(seen) >= max_states:
                result.truncated = True
                continue
            seen.add(nxt)
            queue.append((nxt, d + 1))
    return result


# ---------------------------------------------------------------------------
# saturation and transport of sequences


def segment_sequence(morphism, events):
    """Split into maximal runs sitting over a single image node."""
    segments = []
    for t, b in events:
        node = morphism.space_map(t)
        if segments and segments[-1][0] == node:
            segments[-1][1].append((t, b))
        else:
            segments.append((node, [(t, b)]))
    return segments


def _segment_parikh(morphism, a, segment):
    axis = morphism.source.binding_axis(morphism.space_map.fibre(a))
    pos = {lab: i for i, lab in enumerate(axis)}
    vec = [0] * len(axis)
    for t, b in segment:
        vec[pos[(t, b)]] += 1
    return vec


def saturation_status(morphism, events):
    """Is every transition-image run a fibre flow?  Returns (ok, detail)."""
    tgt_space = morphism.target.space
    for node, segment in segment_sequence(morphism, events):
        if tgt_space.sort_of(node) is Sort.PLACE:
            continue
        parikh = _segment_parikh(morphism, node, segment)
        flows = morphism.source.flows(morphism.space_map.fibre(node), ring=morphism.ring)
        if not flows.contains(parikh):
            return False, (
                f"run over {node!r} has Parikh vector {parikh}, "
                "which is not a flow of the fibre"
            )
    return True, ""


def map_sequence(morphism, events):
    """Image of a saturated sequence: one event per transition run.

    Runs over image places disappear (their effect is already invisible to
    the transported marking); a run over an image transition ``a`` becomes
    the single event ``(a, flow image of its Parikh vector)``.
    """
    morphism.require_verified()
    ok, detail = saturation_status(morphism, events)
    if not ok:
        raise BehaviourError(f"sequence is not saturated: {detail}")
    tgt_space = morphism.target.space
    out = []
    for node, segment in segment_sequence(morphism, events):
        if tgt_space.sort_of(node) is Sort.PLACE:
            continue
        parikh = _segment_parikh(morphism, node, segment)
        image = morphism.flow_image(node, parikh)
        if any(x < 0 or x != int(x) for x in image):
            raise BehaviourError(
                f"image of the run over {node!r} is not a binding multiset: {list(image)}"
            )
        out.append((node, tuple(int(x) for x in image)))
    return out


def _fire_units(net, marking, a, vec):
    """Fire a binding multiset one unit at a time, declaration order.

    Image events of transported runs collapse a sequential run into one
    multiset; enabledness of the image is judged unit by unit, matching the
    sequential firing on the source side.  Returns the final marking or
    None when some unit is disabled.
    """
    current = tuple(marking)
    for mult, b in zip(vec, net.bindings[a]):
        unit = tuple(1 if x == b else 0 for x in net.bindings[a])
        for _ in range(mult):
            need = _event_effect(net, a, unit, "minus")
            if not all(m >= n for m, n in zip(current, need)):
                return None
            gain = _event_effect(net, a, unit, "plus")
            current = tuple(m - n + g for m, n, g in zip(current, need, gain))
    return current


@dataclass(frozen=True)
class MappingReport:
    status: str  # "ok" | "failed"
    detail: str
    image_events: tuple
    source_post: tuple
    target_post: tuple

    @property
    def ok(self):
        return self.status == "ok"


def check_behaviour_mapping(morphism, marking, events):
    """Fire a saturated sequence on both sides and compare the outcomes.

    The node image of the morphism must be open in the target, so that the
    transported marking only touches places the morphism controls.  The
    image sequence must be activated and its post-marking must equal the
    transported source post-marking.
    """
    morphism.require_verified()
    image_nodes = morphism.space_map.image()
    if not morphism.target.space.is_open(image_nodes):
        raise BehaviourError("the image of the morphism is not open in the target")
    src = morphism.source
    start = marking_vector(src, marking)
    post, _ = fire_sequence(src, start, events)
    image_events = map_sequence(morphism, events)
    target_start = tuple(morphism.map_marking(list(start)))
    current = target_start
    for a, vec in image_events:
        stepped = _fire_units(morphism.target, current, a, vec)
        if stepped is None:
            return MappingReport(
                "failed",
                f"image event over {a!r} is not enabled",
                tuple(image_events),
                post,
                current,
            )
        current = stepped
    expected = tuple(morphism.map_marking(list(post)))
    if current != expected:
        return MappingReport(
            "failed",
            f"post-markings differ: fired {list(current)}, transported {list(expected)}",
            tuple(image_events),
            post,
            current,
        )
    return MappingReport("ok", "", tuple(image_events), post, current)


def verify_petri_morphism(morphism, marking_x, marking_y, witness=None):
    """Morphism of marked nets: the transported marking must match.

    Optionally checks a witness sequence activated at the source marking
    maps to an activated image sequence.  Returns (ok, detail).
    """
    report = morphism.verify()
    if report.status == "failed":
        bad = report.first_failure
        return False, f"morphism fails at clause {bad.clause!r}: {bad.detail}"
    mx = marking_vector(morphism.source, marking_x)
    my = marking_vector(morphism.target, marking_y)
    got = tuple(morphism.map_marking(list(mx)))
    if got != my:
        return False, f"marking transports to {list(got)}, expected {list(my)}"
    if witness is not None:
        mapped = check_behaviour_mapping(morphism, mx, witness)
        if not mapped.ok:
            return False, f"witness sequence fails: {mapped.detail}"
    return True, ""


# ---------------------------------------------------------------------------
# modification invariance


@dataclass(frozen=True)
class InvarianceReport:
    status: str  # "ok" | "failed" | "inconclusive"
    detail: str
    source_count: int
    target_count: int

    @property
    def ok(self):
        return self.status == "ok"


def check_modification_invariance(morphism, marking, depth=6, max_states=5_000):
    """Reachability must biject along a modification, edge by edge.

    Both reachability sets are cut at the same depth; hitting a bound makes
    the verdict inconclusive.  Every source step must commute with the
    transport: the image event is enabled at the transported marking and
    reaches the transported successor.
    """
    morphism.require_verified()
    cls = morphism.classify()
    if cls.modification is False:
        return InvarianceReport("failed", "morphism is not a modification", 0, 0)
    src, tgt = morphism.source, morphism.target
    start = marking_vector(src, marking)
    reach_x = reachable(src, start, depth=depth, max_states=max_states, record_edges=True)
    target_start = tuple(morphism.map_marking(list(start)))
    reach_y = reachable(tgt, target_start, depth=depth, max_states=max_states)
    if reach_x.truncated or reach_y.truncated:
        return InvarianceReport(
            "inconclusive",
            "reachability was truncated by the bounds",
            len(reach_x),
            len(reach_y),
        )
    if cls.modification == "inconclusive":
        return InvarianceReport(
            "inconclusive",
            "signedness of the inverse components could not be decided",
            len(reach_x),
            len(reach_y),
        )

    image_of = {}
    for m in reach_x.markings:
        image_of[m] = tuple(morphism.map_marking(list(m)))
    images = set(image_of.values())
    if len(images) != len(reach_x.markings):
        return InvarianceReport(
            "failed", "transport is not injective on the reachable markings",
            len(reach_x), len(reach_y),
        )
    if images != reach_y.markings:
        missing = reach_y.markings - images
        extra = images - reach_y.markings
        return InvarianceReport(
            "failed",
            f"reachable sets do not correspond ({len(missing)} unmatched target, "
            f"{len(extra)} unmatched image markings)",
            len(reach_x),
            len(reach_y),
        )

    event_image = {}
    for t in src.space.transitions:
        a = morphism.space_map(t)
        if tgt.space.sort_of(a) is Sort.PLACE:
            continue
        axis = src.binding_axis(morphism.space_map.fibre(a))
        for b in src.bindings[t]:
            unit = [1 if lab == (t, b) else 0 for lab in axis]
            image = morphism.flow_image(a, unit)
            if any(x < 0 or x != int(x) for x in image):
                return InvarianceReport(
                    "failed",
                    f"image of the single event {t}.{b} is not a binding multiset",
                    len(reach_x),
                    len(reach_y),
                )
            event_image[(t, b)] = (a, tuple(int(x) for x in image))
    for m, (t, b), m2 in reach_x.edges:
        if (t, b) not in event_image:
            return InvarianceReport(
                "failed", f"event {t}.{b} sits over a place", len(reach_x), len(reach_y)
            )
        a, vec = event_image[(t, b)]
        stepped = _fire_units(tgt, image_of[m], a, vec)
        if stepped is None:
            return InvarianceReport(
                "failed",
                f"image event of {t}.{b} is not enabled at a transported marking",
                len(reach_x),
                len(reach_y),
            )
        if stepped != image_of[m2]:
            return InvarianceReport(
                "failed",
                f"transport does not commute with firing {t}.{b}",
                len(reach_x),
                len(reach_y),
            )
    return InvarianceReport("ok", "", len(reach_x), len(reach_y))

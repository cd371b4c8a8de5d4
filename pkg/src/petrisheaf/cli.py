"""Command line front end over the library.

One subcommand per analysis or construction; every subcommand reads
``.pnet`` / ``.pmor`` / ``.pwin`` documents and reports either human text
or, with ``--json``, a sorted-key JSON object (byte-deterministic for
fixed inputs and seed).  Exit codes: 0 success, 1 a checked property
failed, 2 usage or parse problem, 3 inconclusive (a guard or state budget
cut the computation short).

Commands that emit a net or morphism print a valid document on stdout;
provenance and verification notes ride along as ``#`` comments, so the
output can be piped straight into a file and fed back in.
"""

import argparse
import json
import random
import sys
from fractions import Fraction
from pathlib import Path

from . import intlinalg as la
from .behaviour import (
    BehaviourError,
    check_behaviour_mapping,
    fire,
    marking_dict,
    marking_vector,
    reachable,
)
from .formats import (
    FormatError,
    load_net,
    load_winskel,
    parse_morphism,
    parse_net,
    serialize_morphism,
    serialize_net,
)
from .morphism import MorphismError, WinskelError, from_winskel
from .net import (
    NetError,
    basic_covers,
    place_transition_net,
    verify_binding_cosheaf,
    verify_flow_gluing,
    verify_token_sheaf,
)
from .product import (
    ProductError,
    check_reachability_correspondence,
    diagonal,
    fibre_product,
    kronecker,
    product_marking,
)
from .topology import SpaceError

OK = 0
FAILURE = 1
USAGE = 2
INCONCLUSIVE = 3

_STATUS_CODE = {"ok": OK, "failed": FAILURE, "inconclusive": INCONCLUSIVE}


class CliError(Exception):
    """Bad command usage that argparse cannot catch itself."""


class Report:
    """Human lines plus a JSON payload; main prints one of the two."""

    def __init__(self, command):
        self.lines = []
        self.payload = {"command": command}

    def say(self, text):
        self.lines.append(text)

    def put(self, key, value):
        self.payload[key] = value


# ---------------------------------------------------------------------------
# small formatting and input helpers


def _yes(value):
    if value is True:
        return "yes"
    if value is False:
        return "no"
    return str(value)


def _fmt_value(v):
    f = Fraction(v)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def _json_value(v):
    f = Fraction(v)
    return int(f) if f.denominator == 1 else str(f)


def _vector_payload(values):
    return [_json_value(v) for v in values]


def _label(lab):
    node, element = lab
    return f"{node}.{element}"


def _combo(labels, values):
    parts = [f"{_fmt_value(v)}*{lab}" for lab, v in zip(labels, values) if v]
    return " + ".join(parts) if parts else "0"


def _fmt_marking(net, vector):
    parts = [
        f"{p}.{c}={_fmt_value(v)}"
        for (p, c), v in zip(net.token_axis(), vector)
        if v
    ]
    return " ".join(parts) if parts else "(empty)"


def _marking_payload(net, vector):
    return {
        f"{p}.{c}": _json_value(v)
        for (p, c), v in zip(net.token_axis(), vector)
        if v
    }


def _number(text):
    try:
        f = Fraction(text)
    except (ValueError, ZeroDivisionError):
        return None
    return int(f) if f.denominator == 1 else f


def _read_net(path, args):
    doc = parse_net(Path(path).read_text())
    if getattr(args, "strict", False):
        doc.strict = True
    elif getattr(args, "relaxed", False):
        doc.strict = False
    return doc.to_net(), (dict(doc.marking) or None)


def _read_morphism(path):
    path = Path(path)
    doc = parse_morphism(path.read_text())
    if doc.source is None or doc.target is None:
        raise FormatError("morphism document needs source and target lines")
    source_net, source_marking = load_net(path.parent / doc.source)
    target_net, _ = load_net(path.parent / doc.target)
    return doc.to_morphism(source_net, target_net), doc, source_marking


def _parse_marking(net, text):
    values = {}
    for part in text.replace(",", " ").split():
        ref, eq, num = part.partition("=")
        place, dot, colour = ref.partition(".")
        value = _number(num) if eq else None
        if not dot or value is None:
            raise CliError(f"marking entries look like P.C=N, got {part!r}")
        values[(place, colour)] = values.get((place, colour), 0) + value
    return values


def _marking_arg(net, text, file_marking, what="--marking"):
    if text is not None:
        return marking_vector(net, _parse_marking(net, text))
    if file_marking:
        return marking_vector(net, file_marking)
    raise CliError(f"no marking: pass {what} or add a marking line to the net file")


def _parse_sequence(net, text):
    events = []
    for part in text.replace(",", " ").split():
        t, dot, b = part.partition(".")
        if t not in net.bindings:
            raise CliError(f"unknown transition {t!r} in the sequence")
        if dot:
            if b not in net.bindings[t]:
                raise CliError(f"unknown binding {part!r} in the sequence")
            events.append((t, b))
        elif len(net.bindings[t]) == 1:
            events.append((t, net.bindings[t][0]))
        else:
            raise CliError(f"{t!r} has several bindings, write {t}.B")
    return events


def _region_text(net, region):
    if region is None:
        return "all nodes"
    return "{" + ",".join(net.space.ordered(region)) + "}"


def _resolve_region(args, net):
    spec = getattr(args, "region", None) or "all"
    if spec == "all":
        return None
    if spec == "places":
        return net.space.places
    if spec == "transitions":
        return net.space.transitions
    kind, sep, rest = spec.partition(":")
    if sep and kind == "nodes":
        names = tuple(x for x in rest.split(",") if x)
        if not names:
            raise CliError("nodes: region needs at least one node name")
        for x in names:
            net.space.sort_of(x)  # unknown names raise
        return names
    if sep and kind == "fibre":
        if not getattr(args, "via", None):
            raise CliError("region fibre:NODE needs --via MORPHISM.pmor")
        f, _doc, _marking = _read_morphism(args.via)
        if f.source.space.nodes != net.space.nodes:
            raise CliError("the --via morphism's source does not match the net")
        return f.space_map.fibre(rest)
    raise CliError(
        f"unknown region {spec!r}; use all, places, transitions, nodes:A,B or fibre:Y"
    )


def _ring_of(args):
    return {None: None, "z": "Z", "q": "Q", "n": "N"}[getattr(args, "ring", None)]


def _combine(*statuses):
    if "failed" in statuses:
        return FAILURE
    if "inconclusive" in statuses:
        return INCONCLUSIVE
    return OK


# ---------------------------------------------------------------------------
# axiom sweep and the random net pool it runs on


def axiom_sweep(net):
    """Exactness of all three gluing checks on every basic-set covering."""
    space = net.space
    counts = {"token-sheaf": 0, "binding-cosheaf": 0, "flow-gluing": 0}
    failures = []

    def note(report):
        region = ",".join(report.region)
        cover = " ".join("{" + ",".join(part) + "}" for part in report.cover)
        for item in report.failures:
            failures.append(f"{report.kind} over {{{region}}} cover {cover}: {item}")

    for x in space.nodes:
        region = space.basic_open(x)
        for cover in basic_covers(space, region, kind="open"):
            counts["token-sheaf"] += 1
            report = verify_token_sheaf(net, region, cover)
            if not report.ok:
                note(report)
    for x in space.nodes:
        region = space.basic_closed(x)
        for cover in basic_covers(space, region, kind="closed"):
            counts["binding-cosheaf"] += 1
            report = verify_binding_cosheaf(net, region, cover)
            if not report.ok:
                note(report)
            counts["flow-gluing"] += 1
            report = verify_flow_gluing(net, region, cover)
            if not report.ok:
                note(report)
    return counts, failures


def random_strict_net(rng, max_places=4, max_transitions=4):
    """A random strict place/transition net, at most 8 nodes by default."""
    n_places = rng.randint(1, max_places)
    n_transitions = rng.randint(1, max_transitions)
    places = [f"q{i}" for i in range(n_places)]
    transitions = [f"s{i}" for i in range(n_transitions)]
    consume = {}
    produce = {}
    for t in transitions:
        consume[t] = {}
        produce[t] = {}
        for p in places:
            kind = rng.randint(0, 3)
            if kind == 1:
                consume[t][p] = rng.randint(1, 3)
            elif kind == 2:
                produce[t][p] = rng.randint(1, 3)
            elif kind == 3:
                consume[t][p] = rng.randint(1, 3)
                produce[t][p] = rng.randint(1, 3)
    return place_transition_net("rand", places, transitions, consume, produce)


# ---------------------------------------------------------------------------
# subcommand handlers


def cmd_show(args, out):
    net, marking = _read_net(args.net, args)
    space = net.space
    mode = "strict" if net.strict else "relaxed"
    out.say(f"net {net.name} [{mode}, ring {net.ring}]")
    out.say(
        f"places: {len(space.places)}, transitions: {len(space.transitions)}, "
        f"adjacent pairs: {len(space.adjacency)}"
    )
    for x in space.nodes:
        if space.is_place(x):
            out.say(f"place {x}: tokens {' '.join(net.tokens[x])}")
        else:
            out.say(f"transition {x}: bindings {' '.join(net.bindings[x])}")
    index = {n: i for i, n in enumerate(space.nodes)}
    adjacency = sorted(space.adjacency, key=lambda pt: (index[pt[0]], index[pt[1]]))
    out.say(
        "adjacency: "
        + (" ".join(f"{p}~{t}" for p, t in adjacency) if adjacency else "(none)")
    )
    for x in space.nodes:
        out.say(f"basic open {x} = {{{','.join(space.ordered(space.basic_open(x)))}}}")
    for x in space.nodes:
        out.say(
            f"basic closed {x} = {{{','.join(space.ordered(space.basic_closed(x)))}}}"
        )
    out.put("name", net.name)
    out.put("strict", net.strict)
    out.put("ring", net.ring)
    out.put("places", {p: list(net.tokens[p]) for p in space.places})
    out.put("transitions", {t: list(net.bindings[t]) for t in space.transitions})
    out.put("adjacency", [[p, t] for p, t in adjacency])
    out.put(
        "basic_open", {x: list(space.ordered(space.basic_open(x))) for x in space.nodes}
    )
    out.put(
        "basic_closed",
        {x: list(space.ordered(space.basic_closed(x))) for x in space.nodes},
    )
    if marking:
        vector = marking_vector(net, marking)
        out.say(f"marking: {_fmt_marking(net, vector)}")
        out.put("marking", _marking_payload(net, vector))
    else:
        out.put("marking", None)
    return OK


def cmd_flows(args, out):
    net, _ = _read_net(args.net, args)
    region = _resolve_region(args, net)
    ring = _ring_of(args)
    module = net.flows(region, ring="Z" if ring == "N" else ring)
    labels = [_label(lab) for lab in module.axis]
    out.say(f"flows of {net.name} over {_region_text(net, region)}")
    out.put("net", net.name)
    out.put("region", "all" if region is None else list(net.space.ordered(region)))
    out.put("axis", labels)
    if ring == "N":
        generators = la.hilbert_basis(
            module.matrix.as_lists(), len(labels), guard=args.hilbert_guard
        )
        generators = sorted(tuple(g) for g in generators)
        out.say(f"{len(generators)} hilbert generators")
        for g in generators:
            out.say(f"  {_combo(labels, g)}")
        out.put("ring", "N")
        out.put("generators", [_vector_payload(g) for g in generators])
        return OK
    out.say(f"rank {module.rank}")
    for vec in module.basis:
        out.say(f"  {_combo(labels, vec)}")
    out.put("ring", module.ring)
    out.put("rank", module.rank)
    out.put("basis", [_vector_payload(vec) for vec in module.basis])
    return OK


def cmd_classes(args, out):
    net, _ = _read_net(args.net, args)
    ring = _ring_of(args)
    if ring == "N":
        raise CliError("marking classes are computed over z or q, not n")
    region = _resolve_region(args, net)
    module = net.marking_classes(region, ring=ring)
    labels = [_label(lab) for lab in module.axis]
    factors = list(module.invariant_factors)
    out.say(f"marking classes of {net.name} over {_region_text(net, region)}")
    out.say(f"rank {module.rank}")
    out.say("invariant factors: " + (" ".join(map(str, factors)) if factors else "none"))
    classes = {}
    for i, lab in enumerate(labels):
        unit = [0] * len(labels)
        unit[i] = 1
        rep = module.class_of(unit)
        classes[lab] = _vector_payload(rep)
        out.say(f"  [{lab}] = {_combo(labels, rep)}")
    out.put("net", net.name)
    out.put("region", "all" if region is None else list(net.space.ordered(region)))
    out.put("ring", module.ring)
    out.put("axis", labels)
    out.put("rank", module.rank)
    out.put("invariant_factors", factors)
    out.put("torsion", list(module.torsion))
    out.put("classes", classes)
    return OK


def cmd_axioms(args, out):
    net, _ = _read_net(args.net, args)
    counts, failures = axiom_sweep(net)
    out.say(f"net {net.name}: {len(net.space.nodes)} nodes")
    for kind in ("token-sheaf", "binding-cosheaf", "flow-gluing"):
        out.say(f"{kind}: {counts[kind]} coverings checked")
    out.put("net", net.name)
    out.put("checks", counts)
    random_info = None
    if args.random:
        rng = random.Random(args.seed)
        swept = 0
        for i in range(args.random):
            rand_net = random_strict_net(rng)
            rand_counts, rand_failures = axiom_sweep(rand_net)
            swept += sum(rand_counts.values())
            failures.extend(f"random net {i}: {item}" for item in rand_failures)
        random_info = {"nets": args.random, "checks": swept, "seed": args.seed}
        out.say(f"random nets: {args.random} swept, {swept} coverings checked")
    out.put("random", random_info)
    for item in failures:
        out.say(f"FAIL {item}")
    out.say("all exact" if not failures else f"{len(failures)} failures")
    out.put("failures", failures)
    return OK if not failures else FAILURE


def cmd_check_morphism(args, out):
    f, doc, _marking = _read_morphism(args.morphism)
    report = f.verify(hilbert_guard=args.hilbert_guard)
    out.say(f"morphism {f.name}: {f.source.name} -> {f.target.name}")
    clause_payload = []
    for c in report.clauses:
        line = f"{c.clause}: {c.status}"
        if c.detail and c.status != "ok":
            line += f" ({c.detail})"
        out.say(line)
        clause_payload.append(
            {"clause": c.clause, "status": c.status, "detail": c.detail}
        )
    out.put("name", f.name)
    out.put("source", doc.source)
    out.put("target", doc.target)
    out.put("status", report.status)
    out.put("clauses", clause_payload)
    if report.status == "failed":
        out.put("classification", None)
        return FAILURE
    d = f.classify(hilbert_guard=args.hilbert_guard).as_dict()
    out.say(
        f"abstraction: {_yes(d['abstraction'])}; "
        f"embedding: {_yes(d['embedding'])}; discrete: {_yes(d['discrete'])}"
    )
    out.say(
        f"modification: {_yes(d['modification'])}; "
        f"place-modification: {_yes(d['place-modification'])}; "
        f"transition-modification: {_yes(d['transition-modification'])}"
    )
    out.put("classification", d)
    return _STATUS_CODE[report.status]


def cmd_compose(args, out):
    f, f_doc, _m1 = _read_morphism(args.first)
    g, g_doc, _m2 = _read_morphism(args.second)
    if (
        f.target.space.nodes != g.source.space.nodes
        or f.target.bindings != g.source.bindings
        or f.target.tokens != g.source.tokens
    ):
        raise CliError("the first morphism's target must be the second's source")
    try:
        composite = f.then(g)
    except MorphismError as exc:
        out.say(f"composition failed: {exc}")
        out.put("status", "failed")
        out.put("detail", str(exc))
        return FAILURE
    report = composite.verify(hilbert_guard=args.hilbert_guard)
    text = serialize_morphism(composite, f_doc.source, g_doc.target)
    for line in text.splitlines():
        out.say(line)
    out.put("name", composite.name)
    out.put("status", report.status)
    out.put("document", text)
    return _STATUS_CODE[report.status]


def cmd_product(args, out):
    first, first_marking = _read_net(args.first, args)
    second, second_marking = _read_net(args.second, args)
    result = kronecker(first, second)
    comments = [
        f"product of {first.name} and {second.name}",
        f"left factor: {args.first}",
        f"right factor: {args.second}",
    ]
    marking = None
    if args.marked:
        if first_marking is None or second_marking is None:
            raise CliError("--marked needs a marking line in both factor files")
        vector = product_marking(
            result,
            marking_vector(first, first_marking),
            marking_vector(second, second_marking),
        )
        marking = marking_dict(result.net, vector)
        out.put("marking", _marking_payload(result.net, vector))
    else:
        out.put("marking", None)
    text = serialize_net(result.net, marking=marking, comments=comments)
    for line in text.splitlines():
        out.say(line)
    out.put("name", result.net.name)
    out.put("places", len(result.net.space.places))
    out.put("transitions", len(result.net.space.transitions))
    out.put("document", text)
    return OK


def cmd_fibre_product(args, out):
    f, f_doc, _m1 = _read_morphism(args.first)
    g, g_doc, _m2 = _read_morphism(args.second)
    if f.target.space.nodes != g.target.space.nodes:
        raise CliError("fibre products need morphisms into a common target")
    for which, m in (("first", f), ("second", g)):
        report = m.verify(hilbert_guard=args.hilbert_guard)
        if report.status == "failed":
            bad = report.first_failure
            out.say(f"{which} morphism {m.name} fails {bad.clause}: {bad.detail}")
            out.put("status", "failed")
            out.put("detail", f"{m.name}: {bad.clause}")
            return FAILURE
        if not m.classify(hilbert_guard=args.hilbert_guard).discrete:
            raise CliError(
                f"fibre products need discrete morphisms, {m.name} is not discrete"
            )
    try:
        fp = fibre_product(f, g)
    except (ProductError, MorphismError) as exc:
        out.say(f"no fibre product: {exc}")
        out.put("status", "failed")
        out.put("detail", str(exc))
        return FAILURE
    left_report = fp.left.verify(hilbert_guard=args.hilbert_guard)
    right_report = fp.right.verify(hilbert_guard=args.hilbert_guard)
    comments = [
        f"fibre product of {f.name} and {g.name} over {f.target.name}",
        f"left leg onto {f.source.name}: {left_report.status}",
        f"right leg onto {g.source.name}: {right_report.status}",
    ]
    text = serialize_net(fp.net, comments=comments)
    for line in text.splitlines():
        out.say(line)
    out.put("name", fp.net.name)
    out.put("status", "ok")
    out.put("left_status", left_report.status)
    out.put("right_status", right_report.status)
    out.put("square_commutes", fp.inverse.square_commutes)
    out.put("document", text)
    return _combine(left_report.status, right_report.status)


def cmd_diagonal(args, out):
    net, _ = _read_net(args.net, args)
    result = diagonal(net)
    iso_report = result.iso.verify(hilbert_guard=args.hilbert_guard)
    emb_report = result.embedding.verify(hilbert_guard=args.hilbert_guard)
    comments = [
        f"diagonal of {net.name} inside {result.product.net.name}",
        f"renaming iso: {iso_report.status}",
        f"embedding into the square: {emb_report.status}",
    ]
    failure = emb_report.first_failure or iso_report.first_failure
    if failure:
        comments.append(f"failing clause: {failure.clause}")
    text = serialize_net(result.net, comments=comments)
    for line in text.splitlines():
        out.say(line)
    out.put("net", net.name)
    out.put("iso_status", iso_report.status)
    out.put("embedding_status", emb_report.status)
    out.put("failing_clause", failure.clause if failure else None)
    out.put("document", text)
    return _combine(iso_report.status, emb_report.status)


def cmd_simulate(args, out):
    net, file_marking = _read_net(args.net, args)
    current = _marking_arg(net, args.marking, file_marking)
    events = _parse_sequence(net, args.sequence)
    out.say(f"start: {_fmt_marking(net, current)}")
    trace = [_marking_payload(net, current)]
    for i, (t, b) in enumerate(events, start=1):
        try:
            current = fire(net, current, t, b)
        except BehaviourError:
            detail = f"step {i} ({t}.{b}) is not enabled"
            out.say(detail)
            out.put("status", "failed")
            out.put("detail", detail)
            out.put("trace", trace)
            return FAILURE
        out.say(f"step {i} ({t}.{b}): {_fmt_marking(net, current)}")
        trace.append(_marking_payload(net, current))
    out.say(f"final: {_fmt_marking(net, current)}")
    out.put("status", "ok")
    out.put("trace", trace)
    out.put("final", _marking_payload(net, current))
    return OK


def cmd_reach(args, out):
    net, file_marking = _read_net(args.net, args)
    start = _marking_arg(net, args.marking, file_marking)
    result = reachable(net, start, depth=args.depth, max_states=args.max_states)
    count = len(result.markings)
    out.say(f"{count} marking" + ("" if count == 1 else "s"))
    out.say(f"depth reached: {result.depth_reached}")
    budget_exhausted = result.truncated and count >= args.max_states
    if budget_exhausted:
        out.say("note: state budget exhausted, exploration incomplete")
    elif result.truncated:
        out.say("note: cut at the depth bound")
    markings = sorted(result.markings)
    for m in markings:
        out.say(f"  {_fmt_marking(net, m)}")
    out.put("net", net.name)
    out.put("count", count)
    out.put("depth_reached", result.depth_reached)
    out.put("truncated", result.truncated)
    out.put("budget_exhausted", budget_exhausted)
    out.put("markings", [_marking_payload(net, m) for m in markings])
    return INCONCLUSIVE if budget_exhausted else OK


def cmd_map_behaviour(args, out):
    f, _doc, source_marking = _read_morphism(args.morphism)
    start = _marking_arg(f.source, args.marking, source_marking)
    events = _parse_sequence(f.source, args.sequence)
    try:
        report = check_behaviour_mapping(f, start, events)
    except (BehaviourError, MorphismError) as exc:
        out.say(f"mapping failed: {exc}")
        out.put("status", "failed")
        out.put("detail", str(exc))
        return FAILURE
    image = [
        f"{a}[{_combo(f.target.bindings[a], vec)}]" for a, vec in report.image_events
    ]
    out.say("image sequence: " + (" ".join(image) if image else "(empty)"))
    out.say(f"source post: {_fmt_marking(f.source, report.source_post)}")
    out.say(f"target post: {_fmt_marking(f.target, report.target_post)}")
    out.say(f"status: {report.status}" + (f" ({report.detail})" if report.detail else ""))
    out.put("morphism", f.name)
    out.put("status", report.status)
    out.put("detail", report.detail)
    out.put("image_events", image)
    out.put("source_post", _marking_payload(f.source, report.source_post))
    out.put("target_post", _marking_payload(f.target, report.target_post))
    return OK if report.ok else FAILURE


def cmd_winskel(args, out):
    w = load_winskel(args.file)
    try:
        result = from_winskel(w)
    except WinskelError as exc:
        out.say(f"conversion failed: {exc}")
        out.put("status", "failed")
        out.put("detail", str(exc))
        return FAILURE
    projection_report = result.projection.verify(hilbert_guard=args.hilbert_guard)
    fold_report = result.fold.verify(hilbert_guard=args.hilbert_guard)
    domain_closed = w.source.space.is_closed(result.domain.space.nodes)
    image_open = result.merged.space.is_open(result.fold.space_map.image())
    out.say(f"winskel data {w.name}: {w.source.name} -> {w.target.name}")
    out.say(
        f"domain {{{','.join(result.domain.space.nodes)}}} "
        f"closed in {w.source.name}: {_yes(domain_closed)}"
    )
    out.say(f"fold image open in {result.merged.name}: {_yes(image_open)}")
    lines_and_keys = []
    for role, morphism, report in (
        ("projection", result.projection, projection_report),
        ("fold", result.fold, fold_report),
    ):
        entry = {"name": morphism.name, "status": report.status}
        line = f"{role} {morphism.name}: {report.status}"
        if report.status != "failed":
            d = morphism.classify(hilbert_guard=args.hilbert_guard).as_dict()
            entry["classification"] = d
            line += (
                f"; discrete: {_yes(d['discrete'])}"
                f"; place-modification: {_yes(d['place-modification'])}"
            )
        else:
            entry["classification"] = None
            line += f" ({report.first_failure.detail})"
        out.say(line)
        lines_and_keys.append((role, entry))
    out.put("name", w.name)
    out.put("domain", list(result.domain.space.nodes))
    out.put("domain_closed", domain_closed)
    out.put("image_open", image_open)
    for role, entry in lines_and_keys:
        out.put(role, entry)
    out.put("merged_document", serialize_net(result.merged))
    if not (domain_closed and image_open):
        return FAILURE
    return _combine(projection_report.status, fold_report.status)


def cmd_check_product_reach(args, out):
    first, first_marking = _read_net(args.first, args)
    second, second_marking = _read_net(args.second, args)
    v1 = _marking_arg(first, args.marking1, first_marking, what="--marking1")
    v2 = _marking_arg(second, args.marking2, second_marking, what="--marking2")
    result = kronecker(first, second)
    report = check_reachability_correspondence(
        result, v1, v2, depth=args.depth, max_states=args.max_states
    )
    out.say(f"status: {report.status}" + (f" ({report.detail})" if report.detail else ""))
    out.say(
        f"marking counts: first {report.first_count}, "
        f"second {report.second_count}, product {report.product_count}"
    )
    out.put("status", report.status)
    out.put("detail", report.detail)
    out.put("first_count", report.first_count)
    out.put("second_count", report.second_count)
    out.put("product_count", report.product_count)
    return _STATUS_CODE[report.status]


# ---------------------------------------------------------------------------
# parser wiring


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON report")
    common.add_argument(
        "--ring", choices=("n", "z", "q"), help="coefficient ring override"
    )
    mode = common.add_mutually_exclusive_group()
    mode.add_argument(
        "--strict", action="store_true", help="read net files in strict mode"
    )
    mode.add_argument(
        "--relaxed", action="store_true", help="read net files in relaxed mode"
    )
    common.add_argument(
        "--seed", type=int, default=0, help="seed for randomized sweeps"
    )
    common.add_argument(
        "--hilbert-guard",
        dest="hilbert_guard",
        type=int,
        default=10_000,
        metavar="K",
        help="growth guard for Hilbert basis completion",
    )

    parser = argparse.ArgumentParser(
        prog="petrisheaf",
        description="Analyses and constructions on coloured Petri nets over Petri spaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, handler, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(handler=handler)
        return p

    p = add("show", cmd_show, "net summary: sorts, topology, canonical basis")
    p.add_argument("net")

    for name, handler, help_text in (
        ("flows", cmd_flows, "flow module of a closed region"),
        ("classes", cmd_classes, "marking classes of an open region"),
    ):
        p = add(name, handler, help_text)
        p.add_argument("net")
        p.add_argument(
            "--region",
            metavar="R",
            help="all | places | transitions | nodes:A,B | fibre:Y (with --via)",
        )
        p.add_argument("--via", metavar="MOR", help="morphism file resolving fibre: regions")

    p = add("axioms", cmd_axioms, "sheaf/cosheaf exactness on all basic coverings")
    p.add_argument("net")
    p.add_argument(
        "--random",
        type=int,
        default=0,
        metavar="K",
        help="also sweep K seeded random strict nets",
    )

    p = add("check-morphism", cmd_check_morphism, "verify and classify a morphism")
    p.add_argument("morphism")

    p = add("compose", cmd_compose, "compose two morphisms, first then second")
    p.add_argument("first")
    p.add_argument("second")

    p = add("product", cmd_product, "binary product net with tagged axes")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument(
        "--marked",
        action="store_true",
        help="pair the factor file markings into a product marking",
    )

    p = add("fibre-product", cmd_fibre_product, "pullback of two discrete morphisms")
    p.add_argument("first")
    p.add_argument("second")

    p = add("diagonal", cmd_diagonal, "diagonal subnet of the square product")
    p.add_argument("net")

    p = add("simulate", cmd_simulate, "fire a sequence of events step by step")
    p.add_argument("net")
    p.add_argument("--marking", metavar="M", help="start marking, entries P.C=N")
    p.add_argument("--sequence", metavar="S", required=True, help="events T or T.B")

    p = add("reach", cmd_reach, "breadth-first reachable markings")
    p.add_argument("net")
    p.add_argument("--marking", metavar="M", help="start marking, entries P.C=N")
    p.add_argument("--depth", type=int, default=None, metavar="D")
    p.add_argument("--max-states", dest="max_states", type=int, default=10_000)

    p = add("map-behaviour", cmd_map_behaviour, "transport a saturated run forward")
    p.add_argument("morphism")
    p.add_argument("--marking", metavar="M", help="source marking, entries P.C=N")
    p.add_argument("--sequence", metavar="S", required=True, help="events T or T.B")

    p = add("winskel", cmd_winskel, "convert multirelation data to net morphisms")
    p.add_argument("file")

    p = add(
        "check-product-reach",
        cmd_check_product_reach,
        "product reachability against the factor explorations",
    )
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--marking1", metavar="M", help="first factor marking")
    p.add_argument("--marking2", metavar="M", help="second factor marking")
    p.add_argument("--depth", type=int, default=5, metavar="D")
    p.add_argument("--max-states", dest="max_states", type=int, default=10_000)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return OK if exc.code in (0, None) else USAGE
    out = Report(args.command)
    try:
        code = args.handler(args, out)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except (
        FormatError,
        NetError,
        SpaceError,
        MorphismError,
        BehaviourError,
        ProductError,
        WinskelError,
        OSError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except la.ResourceLimitExceeded as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return INCONCLUSIVE
    if args.json:
        print(json.dumps(out.payload, indent=2, sort_keys=True))
    else:
        for line in out.lines:
            print(line)
    return code


if __name__ == "__main__":
    raise SystemExit(main())

"""Products of coloured nets and the constructions that ride on them.

The binary product pairs up nodes (places with places, transitions with
transitions) under the AND adjacency.  A transition pair takes the disjoint
union of its factors' bindings and a place pair the disjoint union of the
factors' tokens, labelled with side tags ``1:`` and ``2:``.  A side-1
binding keeps its side-1 weights against every place pair, whatever the
second coordinate is, and touches no side-2 token; this usually puts
weights on non-adjacent pairs, so the product is a relaxed net, kept over
the rationals because the projections need fractional mark images.

On top of the product live the projection morphisms, the mediating
morphism of a compatible pair, the diagonal embedding, inverse images
along embeddings, and fibre products (pullbacks) built from all of these.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import intlinalg as la
from .behaviour import marking_vector, reachable
from .morphism import NetMorphism, morphisms_equal
from .net import ColouredNet
from .topology import PetriSpace, Sort


class ProductError(ValueError):
    """Ill-matched factors or data with no product counterpart."""


def pair_name(x, y):
    return f"({x},{y})"


def _tag(side, label):
    return f"{side}:{label}"


def _side_of(tagged):
    side, _, label = tagged.partition(":")
    return int(side), label


@dataclass(frozen=True)
class ProductResult:
    """A product net with its two projection morphisms.

    ``pairs`` sends each product node name to the pair of factor nodes it
    stands for.
    """

    net: ColouredNet
    left: NetMorphism
    right: NetMorphism
    pairs: dict

    @property
    def factors(self):
        return (self.left.target, self.right.target)


def kronecker(first, second, name=None):
    """The binary product of two nets, with projections over Q."""
    s1, s2 = first.space, second.space
    nodes = []
    pairs = {}
    for p in s1.places:
        for q in s2.places:
            n = pair_name(p, q)
            nodes.append((n, Sort.PLACE))
            pairs[n] = (p, q)
    for s in s1.transitions:
        for t in s2.transitions:
            n = pair_name(s, t)
            nodes.append((n, Sort.TRANSITION))
            pairs[n] = (s, t)
    adjacency = [
        (pair_name(p, q), pair_name(s, t))
        for (p, s) in s1.adjacency
        for (q, t) in s2.adjacency
    ]
    space = PetriSpace(nodes, adjacency)

    bindings = {
        pair_name(s, t): tuple(
            [_tag(1, b) for b in first.bindings[s]]
            + [_tag(2, b) for b in second.bindings[t]]
        )
        for s in s1.transitions
        for t in s2.transitions
    }
    tokens = {
        pair_name(p, q): tuple(
            [_tag(1, c) for c in first.tokens[p]]
            + [_tag(2, c) for c in second.tokens[q]]
        )
        for p in s1.places
        for q in s2.places
    }

    def fill(kind):
        get1 = first.w_minus if kind == "minus" else first.w_plus
        get2 = second.w_minus if kind == "minus" else second.w_plus
        table = {}
        for s in s1.transitions:
            for b in first.bindings[s]:
                for p in s1.places:
                    for c in first.tokens[p]:
                        v = get1(s, b, p, c)
                        if not v:
                            continue
                        for t in s2.transitions:
                            for q in s2.places:
                                table[
                                    (pair_name(s, t), _tag(1, b), pair_name(p, q), _tag(1, c))
                                ] = v
        for t in s2.transitions:
            for b in second.bindings[t]:
                for q in s2.places:
                    for c in second.tokens[q]:
                        v = get2(t, b, q, c)
                        if not v:
                            continue
                        for s in s1.transitions:
                            for p in s1.places:
                                table[
                                    (pair_name(s, t), _tag(2, b), pair_name(p, q), _tag(2, c))
                                ] = v
        return table

    net = ColouredNet(
        space,
        bindings,
        tokens,
        fill("minus"),
        fill("plus"),
        strict=False,
        ring="Q",
        name=name or f"{first.name}*{second.name}",
    )
    left = _projection(net, pairs, first, second, 1)
    right = _projection(net, pairs, first, second, 2)
    return ProductResult(net, left, right, pairs)


def _projection(prod, pairs, first, second, side):
    """Projection morphism onto one factor.

    Side-tagged unit bindings map to their untagged original, the other
    side's bindings to zero.  Mark images are scaled by the number of
    places of the other factor, so that summing over a place's fibre
    reproduces that place's weights and markings exactly once.
    """
    factor = first if side == 1 else second
    other = second if side == 1 else first
    node_map = {n: xy[side - 1] for n, xy in pairs.items()}

    flow_maps = {}
    for a in factor.space.transitions:
        fibre = [
            n for n in prod.space.transitions if pairs[n][side - 1] == a
        ]
        axis = prod.binding_axis(fibre)
        entries = []
        for i, (_node, tagged) in enumerate(axis):
            unit = [0] * len(axis)
            unit[i] = 1
            tag_side, label = _side_of(tagged)
            entries.append((unit, {label: 1} if tag_side == side else {}))
        flow_maps[a] = entries

    scale = Fraction(1, len(other.space.places))
    mark_maps = {}
    for u in factor.space.places:
        table = {}
        for n in prod.space.places:
            if pairs[n][side - 1] != u:
                continue
            for tagged in prod.tokens[n]:
                tag_side, label = _side_of(tagged)
                table[(n, tagged)] = {label: scale} if tag_side == side else {}
        mark_maps[u] = table

    return NetMorphism(
        prod, factor, node_map, flow_maps, mark_maps, ring="Q", name=f"proj{side}"
    )


# ---------------------------------------------------------------------------
# markings on a product


def product_marking(result, first_marking, second_marking):
    """The marking whose side-1 slice copies the first component and
    side-2 slice the second, at every pairing of the other coordinate."""
    first, second = result.factors
    v1 = marking_vector(first, first_marking)
    v2 = marking_vector(second, second_marking)
    i1 = {lab: i for i, lab in enumerate(first.token_axis())}
    i2 = {lab: i for i, lab in enumerate(second.token_axis())}
    out = []
    for node, tagged in result.net.token_axis():
        p, q = result.pairs[node]
        side, label = _side_of(tagged)
        out.append(v1[i1[(p, label)]] if side == 1 else v2[i2[(q, label)]])
    return tuple(out)


def trace_markings(result, marking):
    """Component markings recovered through the two projections."""
    m = marking_vector(result.net, marking)
    return (
        tuple(result.left.map_marking(list(m))),
        tuple(result.right.map_marking(list(m))),
    )


def is_saturated_marking(result, marking):
    """True when the marking is the product of its own traces."""
    m = marking_vector(result.net, marking)
    t1, t2 = trace_markings(result, m)
    return product_marking(result, t1, t2) == m


@dataclass(frozen=True)
class ReachCorrespondence:
    status: str  # "ok" | "failed" | "inconclusive"
    detail: str
    first_count: int
    second_count: int
    product_count: int

    @property
    def ok(self):
        return self.status == "ok"


def _budget_cut(run, max_states):
    # a depth cut also sets ``truncated``; only the state budget is fatal
    return run.truncated and len(run.markings) >= max_states


def check_reachability_correspondence(
    result, first_marking, second_marking, depth=5, max_states=10_000
):
    """Compare product reachability against the two component explorations.

    The components are explored ``depth`` steps and the product twice as
    far, which is enough to interleave any two component runs.  The product
    must reach every pairing of component states, every reached product
    state must be saturated and trace to component-reachable markings, and
    when both factors are integer nets with integral starts every reached
    state stays integral.  Exhausting the state budget anywhere makes the
    outcome inconclusive; a depth cut does not, the claims are checked on
    what was explored.
    """
    first, second = result.factors
    r1 = reachable(first, first_marking, depth=depth, max_states=max_states)
    r2 = reachable(second, second_marking, depth=depth, max_states=max_states)
    n1, n2 = len(r1.markings), len(r2.markings)
    if _budget_cut(r1, max_states) or _budget_cut(r2, max_states):
        return ReachCorrespondence(
            "inconclusive", "component exploration hit the state budget", n1, n2, 0
        )
    start = product_marking(result, first_marking, second_marking)
    wide = None if depth is None else 2 * depth
    rp = reachable(result.net, start, depth=wide, max_states=max_states)
    if _budget_cut(rp, max_states):
        return ReachCorrespondence(
            "inconclusive",
            "product exploration hit the state budget",
            n1,
            n2,
            len(rp.markings),
        )
    pairings = {product_marking(result, a, b) for a in r1.markings for b in r2.markings}
    if len(pairings) != n1 * n2:
        return ReachCorrespondence(
            "failed", "distinct component pairs collapse in the product", n1, n2, len(pairings)
        )
    if not pairings <= rp.markings:
        return ReachCorrespondence(
            "failed",
            "a pairing of component markings was not reached in the product",
            n1,
            n2,
            len(pairings & rp.markings),
        )
    if wide == depth:
        w1, w2 = r1, r2
    else:
        w1 = reachable(first, first_marking, depth=wide, max_states=max_states)
        w2 = reachable(second, second_marking, depth=wide, max_states=max_states)
    integral = (
        first.ring == "Z"
        and second.ring == "Z"
        and all(Fraction(x).denominator == 1 for x in start)
    )
    matched = 0
    for m in rp.markings:
        if not is_saturated_marking(result, m):
            return ReachCorrespondence(
                "failed", "unsaturated marking reached in the product", n1, n2, matched
            )
        if integral and any(Fraction(x).denominator != 1 for x in m):
            return ReachCorrespondence(
                "failed", "non-integral marking reached in the product", n1, n2, matched
            )
        t1, t2 = trace_markings(result, m)
        if t1 not in w1.markings or t2 not in w2.markings:
            if _budget_cut(w1, max_states) or _budget_cut(w2, max_states):
                return ReachCorrespondence(
                    "inconclusive",
                    "component exploration hit the state budget",
                    n1,
                    n2,
                    matched,
                )
            return ReachCorrespondence(
                "failed", "a product state traces outside the component reach", n1, n2, matched
            )
        if t1 in r1.markings and t2 in r2.markings:
            matched += 1
    if matched != n1 * n2:
        return ReachCorrespondence(
            "failed", "reachable state counts do not multiply", n1, n2, matched
        )
    return ReachCorrespondence("ok", "", n1, n2, matched)


# ---------------------------------------------------------------------------
# mediating morphisms and the diagonal


def _component_image(src, to_factor, a, axis, phi):
    """One factor's contribution to the pairing image of a fibre flow.

    ``phi`` lives over the pairing fibre, a subset of ``to_factor``'s own
    fibre over ``a``; it is extended by zero and must still be a flow
    there, otherwise no pairing morphism exists.
    """
    big_axis = src.binding_axis(to_factor.space_map.fibre(a))
    pos = {lab: i for i, lab in enumerate(big_axis)}
    ext = [0] * len(big_axis)
    for lab, v in zip(axis, phi):
        ext[pos[lab]] = v
    if not src.flows(to_factor.space_map.fibre(a), ring="Z").contains(ext):
        raise ProductError(
            f"no pairing: a fibre flow over {a!r} does not extend to the factor fibre"
        )
    return to_factor.flow_image(a, ext)


def mediate(result, to_first, to_second, name=None):
    """The pairing morphism into the product induced by two morphisms.

    Both arguments must be discrete, verified, share their source net and
    land in the two factors.  Flow data is the pairing of the factors' data
    on the canonical flow basis of each fibre; mark data tags and
    concatenates the factors' token images.
    """
    first, second = result.factors
    if to_first.source is not to_second.source:
        raise ProductError("mediating morphisms must share their source")
    for g, factor, side in ((to_first, first, 1), (to_second, second, 2)):
        if g.target is not factor and g.target.space.nodes != factor.space.nodes:
            raise ProductError(f"{g.name!r} does not land in factor {side}")
        if not g.space_map.is_discrete():
            raise ProductError(
                f"mediate needs discrete (sort-preserving) morphisms, {g.name!r} is not"
            )
        g.require_verified()

    src = to_first.source
    node_map = {}
    for x in src.space.nodes:
        n = pair_name(to_first.space_map(x), to_second.space_map(x))
        if n not in result.pairs:
            raise ProductError(f"images of {x!r} differ in sort, no product node")
        node_map[x] = n
    image = set(node_map.values())

    flow_maps = {}
    for n in result.net.space.transitions:
        if n not in image:
            continue
        a1, a2 = result.pairs[n]
        fibre = tuple(x for x in src.space.nodes if node_map[x] == n)
        axis = src.binding_axis(fibre)
        entries = []
        for phi in src.flows(fibre, ring="Z").basis:
            img1 = _component_image(src, to_first, a1, axis, phi)
            img2 = _component_image(src, to_second, a2, axis, phi)
            vec = {_tag(1, b): v for b, v in zip(first.bindings[a1], img1) if v}
            vec.update({_tag(2, b): v for b, v in zip(second.bindings[a2], img2) if v})
            entries.append((list(phi), vec))
        flow_maps[n] = entries

    mark_maps = {}
    for n in result.net.space.places:
        if n not in image:
            continue
        u1, u2 = result.pairs[n]
        fibre = tuple(x for x in src.space.nodes if node_map[x] == n)
        table = {}
        for lab in src.token_axis(fibre):
            v1 = to_first.mark_maps[u1][lab]
            v2 = to_second.mark_maps[u2][lab]
            vec = {_tag(1, c): v for c, v in zip(first.tokens[u1], v1) if v}
            vec.update({_tag(2, c): v for c, v in zip(second.tokens[u2], v2) if v})
            table[lab] = vec
        mark_maps[n] = table

    return NetMorphism(
        src,
        result.net,
        node_map,
        flow_maps,
        mark_maps,
        ring="Q",
        name=name or f"<{to_first.name},{to_second.name}>",
    )


@dataclass(frozen=True)
class DiagonalResult:
    """The diagonal subnet of a square product.

    ``net`` lives on the nodes ``(x,x)``; its binding and token modules are
    the diagonals of the product modules, written over the original axis
    labels, so it is a renamed copy of the base net.  ``iso`` renames the
    base net onto it, ``embedding`` includes it into the square by sending
    each axis to the sum of its two tagged copies.
    """

    product: ProductResult
    net: ColouredNet
    iso: NetMorphism
    embedding: NetMorphism

    def iso_inverse(self):
        """The renaming back from the diagonal subnet onto the base net."""
        base = self.iso.source
        flow_maps = {}
        for a in base.space.transitions:
            entries = []
            for i, b in enumerate(base.bindings[a]):
                unit = [0] * len(base.bindings[a])
                unit[i] = 1
                entries.append((unit, {b: 1}))
            flow_maps[a] = entries
        mark_maps = {
            u: {(pair_name(u, u), c): {c: 1} for c in base.tokens[u]}
            for u in base.space.places
        }
        return NetMorphism(
            self.net,
            base,
            {pair_name(x, x): x for x in base.space.nodes},
            flow_maps,
            mark_maps,
            ring=base.ring,
            name="delta-inv",
        )

    def doubling(self):
        """The composite of ``iso`` and ``embedding`` into the square."""
        composite = self.iso.then(self.embedding)
        composite.name = "diag"
        return composite


def diagonal(net, name=None):
    """The diagonal subnet of the square of a net, with iso and embedding.

    The subnet keeps the nodes ``(x,x)`` under the subspace topology, and
    each binding or token module is the diagonal submodule of the product
    module, which the original axis labels parametrize; the weights carry
    over unchanged.  Both returned morphisms come with their verification
    reports attached.  The renaming iso always verifies; the embedding's
    marking-class transport genuinely fails on a transition that touches
    two or more places with an unbalanced weight column, because the
    diagonal relation has no counterpart among the product relations, and
    the report then says so.
    """
    result = kronecker(net, net, name=name)
    space = PetriSpace(
        [(pair_name(x, x), net.space.sort_of(x)) for x in net.space.nodes],
        [(pair_name(p, p), pair_name(t, t)) for (p, t) in net.space.adjacency],
    )
    tables = []
    for get in (net.w_minus, net.w_plus):
        table = {}
        for a in net.space.transitions:
            for b in net.bindings[a]:
                for u in net.space.places:
                    for c in net.tokens[u]:
                        v = get(a, b, u, c)
                        if v:
                            table[(pair_name(a, a), b, pair_name(u, u), c)] = v
        tables.append(table)
    delta = ColouredNet(
        space,
        {pair_name(a, a): net.bindings[a] for a in net.space.transitions},
        {pair_name(u, u): net.tokens[u] for u in net.space.places},
        tables[0],
        tables[1],
        strict=net.strict,
        ring=net.ring,
        name=f"diag({net.name})",
    )

    iso_flows = {}
    emb_flows = {}
    for a in net.space.transitions:
        renamed, doubled = [], []
        for i, b in enumerate(net.bindings[a]):
            unit = [0] * len(net.bindings[a])
            unit[i] = 1
            renamed.append((unit, {b: 1}))
            doubled.append((unit, {_tag(1, b): 1, _tag(2, b): 1}))
        iso_flows[pair_name(a, a)] = renamed
        emb_flows[pair_name(a, a)] = doubled
    iso_marks = {
        pair_name(u, u): {(u, c): {c: 1} for c in net.tokens[u]}
        for u in net.space.places
    }
    emb_marks = {
        pair_name(u, u): {
            (pair_name(u, u), c): {_tag(1, c): 1, _tag(2, c): 1} for c in net.tokens[u]
        }
        for u in net.space.places
    }
    iso = NetMorphism(
        net,
        delta,
        {x: pair_name(x, x) for x in net.space.nodes},
        iso_flows,
        iso_marks,
        ring=net.ring,
        name="delta",
    )
    emb = NetMorphism(
        delta,
        result.net,
        {n: n for n in delta.space.nodes},
        emb_flows,
        emb_marks,
        ring="Q",
        name="diag-include",
    )
    iso.verify()
    emb.verify()
    return DiagonalResult(result, delta, iso, emb)


def factors_through_diagonal(diag, morphism):
    """True when a morphism into the square lands inside the diagonal.

    Node images must be diagonal nodes, every flow image must lie in the
    rational span of the embedded binding diagonal and every mark image in
    the span of the embedded token diagonal.
    """
    if morphism.target.space.nodes != diag.product.net.space.nodes:
        raise ProductError("the morphism does not land in the squared net")
    if not set(morphism.space_map.mapping.values()) <= set(diag.net.space.nodes):
        return False
    for a in morphism.image_transitions():
        span = la.Subspace(
            len(diag.product.net.bindings[a]),
            [list(v) for v in diag.embedding.flow_maps[a][1]],
        )
        if any(list(img) not in span for img in morphism.flow_maps[a][1]):
            return False
    for u in morphism.image_places():
        span = la.Subspace(
            len(diag.product.net.tokens[u]),
            [list(v) for v in diag.embedding.mark_maps[u].values()],
        )
        if any(list(img) not in span for img in morphism.mark_maps[u].values()):
            return False
    return True


# ---------------------------------------------------------------------------
# inverse images and fibre products


def _integer_points(subspace):
    """The lattice of integer vectors inside a rational subspace."""
    n = subspace.ambient_dim
    if subspace.rank == 0:
        return la.Lattice(n)
    if subspace.rank == n:
        return la.Lattice(n, la.identity(n))
    rows = [list(b) for b in subspace.basis]
    constraints = []
    for c in la.rat_kernel_basis(rows, n):
        den = math.lcm(*(Fraction(v).denominator for v in c))
        constraints.append([int(Fraction(v) * den) for v in c])
    return la.kernel_lattice(constraints, n)


def _name_basis(names, lattice):
    """Keep original axis names on unit basis vectors, invent the rest."""
    used = set(names)
    out = []
    counter = 0
    for vec in lattice.basis:
        support = [i for i, v in enumerate(vec) if v]
        if len(support) == 1 and vec[support[0]] == 1:
            out.append((names[support[0]], tuple(vec)))
            continue
        counter += 1
        candidate = f"g{counter}"
        while candidate in used:
            counter += 1
            candidate = f"g{counter}"
        used.add(candidate)
        out.append((candidate, tuple(vec)))
    return tuple(out)


@dataclass(frozen=True)
class InverseImageResult:
    """A pulled-back subnet with its Cartesian square of morphisms.

    ``into_source`` includes the subnet into the source of the pulled-back
    map; ``to_subnet`` restricts that map onto the embedded subnet; the two
    composites into the common target agree exactly when
    ``square_commutes`` holds.  ``binding_bases``/``token_bases`` give each
    refined axis as a vector over the original axes.
    """

    net: ColouredNet
    into_source: NetMorphism
    to_subnet: NetMorphism
    binding_bases: dict
    token_bases: dict
    square_commutes: bool


def inverse_image(f, j, name=None):
    """Pull the subnet picked out by an embedding back along a map.

    ``f`` must be discrete (sort-preserving) and verified, ``j`` a verified
    topological embedding into the same target.  The result keeps the nodes
    whose ``f``-image lies in the image of ``j``, and refines each binding
    and token module to the integer vectors that ``f`` sends into the
    embedded submodule; the canonical basis of each refined module becomes
    the new axis, and nodes whose refined module vanishes carry no elements
    and are dropped.  Weights are rewritten over the new bases; a rewritten
    weight that is negative, fractional, or outside the refined token
    modules has no net counterpart and raises.  The result also carries the
    inclusion into the source and the restriction onto the subnet, and
    checks that the square over the target commutes.
    """
    f.require_verified()
    j.require_verified()
    if f.target is not j.target and f.target.space.nodes != j.target.space.nodes:
        raise ProductError("inverse image needs a common target net")
    if not f.space_map.is_discrete():
        raise ProductError("inverse image needs a discrete map")
    if not j.space_map.is_embedding():
        raise ProductError("inverse image needs a topological embedding")

    src = f.source
    sub = j.source
    back = {j.space_map(z): z for z in sub.space.nodes}
    node_level = [x for x in src.space.nodes if f.space_map(x) in back]
    level_places = [x for x in node_level if src.space.is_place(x)]
    level_transitions = [x for x in node_level if src.space.is_transition(x)]

    binding_bases = {}
    flow_images = {}
    for x in level_transitions:
        a = f.space_map(x)
        dim = len(f.target.bindings[a])
        fibre_axis = src.binding_axis(f.space_map.fibre(a))
        pos = {lab: i for i, lab in enumerate(fibre_axis)}
        cols = []
        for b in src.bindings[x]:
            ext = [0] * len(fibre_axis)
            ext[pos[(x, b)]] = 1
            cols.append([Fraction(v) for v in f.flow_image(a, ext)])
        _, j_images = j.flow_maps[a]
        span = la.Subspace(dim, [list(v) for v in j_images])
        matrix = [[cols[k][i] for k in range(len(cols))] for i in range(dim)]
        pre = la.rat_preimage_subspace(matrix, span, cols=len(cols))
        binding_bases[x] = _name_basis(src.bindings[x], _integer_points(pre))
        flow_images[x] = {
            bn: [sum(bv * cols[k][i] for k, bv in enumerate(bvec)) for i in range(dim)]
            for bn, bvec in binding_bases[x]
        }

    token_bases = {}
    mark_images = {}
    for x in level_places:
        u = f.space_map(x)
        dim = len(f.target.tokens[u])
        cols = [[Fraction(v) for v in f.mark_maps[u][(x, c)]] for c in src.tokens[x]]
        span = la.Subspace(dim, [list(j.mark_maps[u][(back[u], c)]) for c in sub.tokens[back[u]]])
        matrix = [[cols[k][i] for k in range(len(cols))] for i in range(dim)]
        pre = la.rat_preimage_subspace(matrix, span, cols=len(cols))
        token_bases[x] = _name_basis(src.tokens[x], _integer_points(pre))
        mark_images[x] = {
            tn: [sum(tv * cols[k][i] for k, tv in enumerate(tvec)) for i in range(dim)]
            for tn, tvec in token_bases[x]
        }

    kept_transitions = [x for x in level_transitions if binding_bases[x]]
    kept_places = [x for x in level_places if token_bases[x]]
    if not kept_places or not kept_transitions:
        raise ProductError("inverse image keeps no place or no transition")
    kept_set = set(kept_transitions) | set(kept_places)
    kept = [x for x in node_level if x in kept_set]

    w_minus, w_plus = {}, {}
    for x in kept_transitions:
        for bn, bvec in binding_bases[x]:
            for y in level_places:
                basis = token_bases[y]
                for store, get in ((w_minus, src.w_minus), (w_plus, src.w_plus)):
                    combo = [
                        sum(bv * get(x, b, y, c) for bv, b in zip(bvec, src.bindings[x]))
                        for c in src.tokens[y]
                    ]
                    if not any(combo):
                        continue
                    if not basis:
                        raise ProductError(
                            f"weights of {x!r} at {y!r} leave the refined token module"
                        )
                    basis_matrix = [
                        [vec[i] for _nm, vec in basis] for i in range(len(src.tokens[y]))
                    ]
                    coords = la.solve_columns(basis_matrix, combo, cols=len(basis))
                    if coords is None:
                        raise ProductError(
                            f"weights of {x!r} at {y!r} leave the refined token module"
                        )
                    for (tn, _vec), wgt in zip(basis, coords):
                        if wgt < 0:
                            raise ProductError(
                                f"negative rebased weight on {x}.{bn} at {y}.{tn}"
                            )
                        if wgt:
                            store[(x, bn, y, tn)] = wgt

    space = PetriSpace(
        [(x, src.space.sort_of(x)) for x in kept],
        [(p, t) for (p, t) in src.space.adjacency if p in kept_set and t in kept_set],
    )
    net = ColouredNet(
        space,
        {x: tuple(nm for nm, _ in binding_bases[x]) for x in kept_transitions},
        {x: tuple(nm for nm, _ in token_bases[x]) for x in kept_places},
        w_minus,
        w_plus,
        strict=False,
        ring=src.ring,
        name=name or f"{src.name}|{sub.name}",
    )

    incl_flows = {}
    for x in kept_transitions:
        entries = []
        for k, (_bn, bvec) in enumerate(binding_bases[x]):
            unit = [0] * len(binding_bases[x])
            unit[k] = 1
            entries.append((unit, list(bvec)))
        incl_flows[x] = entries
    incl_marks = {
        x: {(x, tn): list(tvec) for tn, tvec in token_bases[x]} for x in kept_places
    }
    into_source = NetMorphism(
        net,
        src,
        {x: x for x in kept},
        incl_flows,
        incl_marks,
        ring=src.ring,
        name=f"include-{net.name}",
    )

    commutes = True
    restr_flows = {}
    for z in sub.space.transitions:
        fibre = tuple(x for x in kept_transitions if back[f.space_map(x)] == z)
        if not fibre:
            continue
        a = j.space_map(z)
        j_basis, j_images = j.flow_maps[a]
        jmat = [[v[i] for v in j_images] for i in range(len(f.target.bindings[a]))]
        axis = net.binding_axis(fibre)
        entries = []
        for idx, (x, bn) in enumerate(axis):
            psi = flow_images[x][bn]
            lam = la.rat_solve_columns(jmat, list(psi), cols=len(j_images))
            if lam is None:
                raise ProductError(
                    f"flow data of {x!r} does not restrict onto the subnet"
                )
            if psi != [
                sum(l * v[i] for l, v in zip(lam, j_images))
                for i in range(len(f.target.bindings[a]))
            ]:
                commutes = False
            beta = [
                sum(l * b[i] for l, b in zip(lam, j_basis))
                for i in range(len(sub.bindings[z]))
            ]
            unit = [0] * len(axis)
            unit[idx] = 1
            entries.append((unit, beta))
        restr_flows[z] = entries

    restr_marks = {}
    for z in sub.space.places:
        members = [x for x in kept_places if back[f.space_map(x)] == z]
        if not members:
            continue
        u = j.space_map(z)
        jcols = [list(j.mark_maps[u][(z, c)]) for c in sub.tokens[z]]
        jmat = [[v[i] for v in jcols] for i in range(len(f.target.tokens[u]))]
        table = {}
        for x in members:
            for tn, _tvec in token_bases[x]:
                psi = mark_images[x][tn]
                lam = la.rat_solve_columns(jmat, list(psi), cols=len(jcols))
                if lam is None:
                    raise ProductError(
                        f"mark data of {x!r} does not restrict onto the subnet"
                    )
                if psi != [
                    sum(l * v[i] for l, v in zip(lam, jcols))
                    for i in range(len(f.target.tokens[u]))
                ]:
                    commutes = False
                table[(x, tn)] = lam
        restr_marks[z] = table

    to_subnet = NetMorphism(
        net,
        sub,
        {x: back[f.space_map(x)] for x in kept},
        restr_flows,
        restr_marks,
        ring="Q",
        name=f"restrict-{net.name}",
    )
    commutes = commutes and all(
        f.space_map(x) == j.space_map(back[f.space_map(x)]) for x in kept
    )
    return InverseImageResult(
        net, into_source, to_subnet, binding_bases, token_bases, commutes
    )


def factor_cone(inverse, to_source, to_subnet, name=None):
    """Factor a commuting cone through an inverse image.

    ``to_source`` and ``to_subnet`` must be discrete verified morphisms
    from a common net into the source and the subnet of the square; when
    the underlying square relation holds their pairing factors uniquely
    through the pulled-back subnet, and the factorization is returned after
    checking both triangle identities.
    """
    apex = to_source.source
    if to_subnet.source is not apex and to_subnet.source.space.nodes != apex.space.nodes:
        raise ProductError("cone legs must share their source")
    if to_source.target.space.nodes != inverse.into_source.target.space.nodes:
        raise ProductError("the first cone leg must land in the pulled-back source")
    if to_subnet.target.space.nodes != inverse.to_subnet.target.space.nodes:
        raise ProductError("the second cone leg must land in the subnet")
    for g in (to_source, to_subnet):
        if not g.space_map.is_discrete():
            raise ProductError(
                f"cone legs must be discrete (sort-preserving), {g.name!r} is not"
            )
        g.require_verified()

    vnet = inverse.net
    vnodes = set(vnet.space.nodes)
    node_map = {}
    for w in apex.space.nodes:
        x = to_source.space_map(w)
        if x not in vnodes:
            raise ProductError(f"cone image {x!r} is not in the inverse image")
        node_map[w] = x
    image = set(node_map.values())

    flow_maps = {}
    for x in vnet.space.transitions:
        if x not in image:
            continue
        basis, images = to_source.flow_maps[x]
        vmat = [
            [vec[i] for _nm, vec in inverse.binding_bases[x]]
            for i in range(len(to_source.target.bindings[x]))
        ]
        entries = []
        for phi, psi in zip(basis, images):
            lam = la.rat_solve_columns(vmat, list(psi), cols=len(inverse.binding_bases[x]))
            if lam is None:
                raise ProductError(
                    f"cone flow data over {x!r} misses the refined binding module"
                )
            entries.append((list(phi), lam))
        flow_maps[x] = entries

    mark_maps = {}
    for x in vnet.space.places:
        if x not in image:
            continue
        vmat = [
            [vec[i] for _nm, vec in inverse.token_bases[x]]
            for i in range(len(to_source.target.tokens[x]))
        ]
        table = {}
        for lab, psi in to_source.mark_maps[x].items():
            lam = la.rat_solve_columns(vmat, list(psi), cols=len(inverse.token_bases[x]))
            if lam is None:
                raise ProductError(
                    f"cone mark data over {x!r} misses the refined token module"
                )
            table[lab] = lam
        mark_maps[x] = table

    factored = NetMorphism(
        apex, vnet, node_map, flow_maps, mark_maps, ring="Q", name=name or "cone-factor"
    )
    if not morphisms_equal(factored.then(inverse.into_source), to_source):
        raise ProductError("cone does not factor through the inverse image")
    if not morphisms_equal(factored.then(inverse.to_subnet), to_subnet):
        raise ProductError("cone legs do not agree over the target square")
    return factored


@dataclass(frozen=True)
class FibreProductResult:
    """A pullback net with its projections and structure morphism.

    ``left``/``right`` project onto the two sources and ``basis`` is the
    common composite down to the shared target.  The intermediate pieces
    stay accessible: the plain product, the pairing into the target's
    square, the target diagonal, and the inverse image that carved the
    pullback out of the product.
    """

    net: ColouredNet
    left: NetMorphism
    right: NetMorphism
    basis: NetMorphism
    product: ProductResult
    mediating: NetMorphism
    diagonal: DiagonalResult
    inverse: InverseImageResult
    cone_factorizations: tuple = ()


def fibre_product(to_target_first, to_target_second, name=None, cones=()):
    """The pullback of two discrete morphisms with a common target.

    Built as the inverse image, along the target's diagonal, of the pairing
    of the two composites with the product projections.  Each supplied cone
    ``(q1, q2)`` with equal composites into the target is factored through
    the pullback; the factorizations come back in order, and a cone that
    does not factor raises.
    """
    g1, g2 = to_target_first, to_target_second
    if g1.target is not g2.target and g1.target.space.nodes != g2.target.space.nodes:
        raise ProductError("fibre product needs a common target")
    for g in (g1, g2):
        if not g.space_map.is_discrete():
            raise ProductError(
                f"fibre product needs discrete (sort-preserving) morphisms, {g.name!r} is not"
            )
        g.require_verified()
    prod = kronecker(g1.source, g2.source)
    prod.left.verify()
    prod.right.verify()
    diag = diagonal(g1.target)
    h = mediate(
        diag.product,
        prod.left.then(g1),
        prod.right.then(g2),
        name=f"<{g1.name},{g2.name}>",
    )
    report = h.verify()
    if report.status == "failed":
        raise ProductError(f"pairing does not verify: {report.first_failure.clause}")
    inv = inverse_image(h, diag.embedding, name=name)
    left = inv.into_source.then(prod.left)
    left.name = "fib-proj1"
    right = inv.into_source.then(prod.right)
    right.name = "fib-proj2"
    basis = inv.to_subnet.then(diag.iso_inverse())
    basis.name = "fib-basis"
    factored = []
    for q1, q2 in cones:
        u = factor_cone(inv, mediate(prod, q1, q2), q1.then(g1).then(diag.iso))
        if not morphisms_equal(u.then(left), q1) or not morphisms_equal(u.then(right), q2):
            raise ProductError("cone does not factor through the fibre product")
        factored.append(u)
    return FibreProductResult(
        inv.net, left, right, basis, prod, h, diag, inv, tuple(factored)
    )

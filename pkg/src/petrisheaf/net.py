"""Coloured Petri nets over Petri spaces and their section modules.

A net fixes a binding set per transition and a token set (colours) per
place, plus consume/produce weights w-/w+ between bindings and tokens.
Tokens form a sheaf on the open sets (sections are token vectors, the
restriction maps are coordinate projections); bindings form a cosheaf on
the closed sets (extension by zero).  On a closed region the kernel of the
incidence matrix gives the flows; on an open region its cokernel gives the
marking classes.

Strict nets require the weight support to match the adjacency relation
exactly; relaxed nets (products are the main source) may carry weights on
non-adjacent pairs, at the price of some restriction maps failing, see
``restrict_flow``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from . import intlinalg as la
from .topology import PetriSpace, Sort


class NetError(ValueError):
    """Malformed net data or an ill-typed region operation."""


@dataclass(frozen=True)
class LabeledMatrix:
    """Integer matrix with (place, token) rows and (transition, binding) columns."""

    entries: tuple
    row_labels: tuple
    col_labels: tuple

    def as_lists(self):
        return [list(row) for row in self.entries]


class ColouredNet:
    """A coloured net: Petri space + bindings + tokens + arc weights."""

    __slots__ = ("name", "space", "bindings", "tokens", "strict", "ring", "_wm", "_wp")

    def __init__(
        self,
        space,
        bindings,
        tokens,
        w_minus,
        w_plus,
        strict=True,
        ring="Z",
        name="net",
    ):
        if ring not in ("Z", "Q"):
            raise NetError(f"ring must be 'Z' or 'Q', got {ring!r}")
        if not space.places or not space.transitions:
            raise NetError("a coloured net needs at least one place and one transition")
        self.space = space
        self.name = name
        self.strict = bool(strict)
        self.ring = ring

        def check_axes(given, nodes, what):
            given = {k: tuple(v) for k, v in dict(given).items()}
            if set(given) != set(nodes):
                raise NetError(f"{what} must be declared for exactly the {what[:-1]} nodes")
            for node, names in given.items():
                if not names:
                    raise NetError(f"empty {what} set on {node!r}")
                if len(set(names)) != len(names):
                    raise NetError(f"duplicate {what} names on {node!r}")
            return given

        self.bindings = check_axes(bindings, space.transitions, "bindings")
        self.tokens = check_axes(tokens, space.places, "tokens")

        def check_weights(w, which):
            out = {}
            for (t, b, p, c), value in dict(w).items():
                if t not in self.bindings or b not in self.bindings[t]:
                    raise NetError(f"{which} weight on unknown binding {t}.{b}")
                if p not in self.tokens or c not in self.tokens[p]:
                    raise NetError(f"{which} weight on unknown token {p}.{c}")
                if value < 0:
                    raise NetError(f"{which} weight must be a natural number")
                if value:
                    out[(t, b, p, c)] = int(value)
            return out

        self._wm = check_weights(w_minus, "consume")
        self._wp = check_weights(w_plus, "produce")

        support = {(p, t) for (t, _b, p, _c) in (*self._wm, *self._wp)}
        if self.strict:
            if support != space.adjacency:
                off = support ^ space.adjacency
                raise NetError(
                    f"strict net: weight support must equal adjacency, mismatch on {sorted(off)}"
                )
        else:
            # relaxed nets may weight any pair; nothing to check
            pass

    # -- weights --------------------------------------------------------

    def w_minus(self, t, b, p, c):
        return self._wm.get((t, b, p, c), 0)

    def w_plus(self, t, b, p, c):
        return self._wp.get((t, b, p, c), 0)

    def w(self, t, b, p, c):
        return self.w_plus(t, b, p, c) - self.w_minus(t, b, p, c)

    # -- axes -----------------------------------------------------------

    def token_axis(self, region=None):
        places = self.space.places if region is None else self.space.places_in(region)
        return tuple((p, c) for p in places for c in self.tokens[p])

    def binding_axis(self, region=None):
        transitions = (
            self.space.transitions if region is None else self.space.transitions_in(region)
        )
        return tuple((t, b) for t in transitions for b in self.bindings[t])

    def binding_effect(self, t, b, region=None, kind="difference"):
        """Column of the incidence over the token axis of ``region``."""
        pick = {
            "difference": self.w,
            "minus": self.w_minus,
            "plus": self.w_plus,
        }[kind]
        return [pick(t, b, p, c) for p, c in self.token_axis(region)]

    def incidence_matrix(self, row_region=None, col_region=None, kind="difference"):
        """Tokens-by-bindings matrix; weights default to 0 off support."""
        if col_region is None:
            col_region = row_region
        rows = self.token_axis(row_region)
        cols = self.binding_axis(col_region)
        pick = {
            "difference": self.w,
            "minus": self.w_minus,
            "plus": self.w_plus,
        }[kind]
        entries = tuple(
            tuple(pick(t, b, p, c) for t, b in cols) for p, c in rows
        )
        return LabeledMatrix(entries, rows, cols)

    # -- section modules --------------------------------------------------

    def flows(self, region=None, ring=None):
        """Flows on a closed region: kernel of its incidence matrix.

        The matrix runs over *all* place/transition pairs inside the region,
        so a flow balances every token of the region, adjacent or not; on a
        strict net this agrees with summing over adjacent pairs only.
        """
        ring = ring or self.ring
        region = tuple(self.space.nodes) if region is None else self.space.ordered(region)
        if not self.space.is_closed(region):
            raise NetError(f"flows need a closed region, {list(region)} is not closed")
        mat = self.incidence_matrix(region)
        cols = len(mat.col_labels)
        m = mat.as_lists()
        if ring == "Z":
            module = la.kernel_lattice(m, cols)
        else:
            module = la.Subspace(cols, la.rat_kernel_basis(m, cols))
        return FlowModule(self, region, mat, ring, module)

    def marking_classes(self, region=None, ring=None):
        """Marking classes on an open region: cokernel of its incidence."""
        ring = ring or self.ring
        region = tuple(self.space.nodes) if region is None else self.space.ordered(region)
        if not self.space.is_open(region):
            raise NetError(f"marking classes need an open region, {list(region)} is not open")
        mat = self.incidence_matrix(region)
        dim = len(mat.row_labels)
        relations = [
            [mat.entries[i][j] for i in range(dim)] for j in range(len(mat.col_labels))
        ]
        if ring == "Z":
            quotient = la.QuotientModule(dim, relations)
        else:
            quotient = la.QuotientSpace(dim, relations)
        return ClassModule(self, region, mat, ring, quotient)

    # -- restriction / extension -----------------------------------------

    def restrict_flow(self, vector, big_region, small_region):
        """Project a flow on ``big_region`` down to a closed subregion.

        On strict nets the result is always a flow of the smaller region.
        On relaxed nets transitions outside the subregion can still move
        tokens inside it, so the projection may fail the smaller region's
        balance conditions; that raises rather than returning a non-flow.
        """
        big = self.space.ordered(big_region)
        small = self.space.ordered(small_region)
        if not set(small) <= set(big):
            raise NetError("restriction target is not a subregion")
        big_axis = self.binding_axis(big)
        if len(vector) != len(big_axis):
            raise NetError("flow vector has the wrong length")
        small_flows = self.flows(small, ring="Q" if self.ring == "Q" else "Z")
        pos = {lab: i for i, lab in enumerate(big_axis)}
        out = [vector[pos[lab]] for lab in self.binding_axis(small)]
        if not small_flows.contains(out):
            raise NetError(
                "projection is not a flow of the subregion"
                + ("" if self.strict else " (relaxed net: restriction undefined here)")
            )
        return out

    def extend_binding_section(self, vector, small_region, big_region):
        """Extension by zero along closed regions (the binding cosheaf)."""
        small = self.space.ordered(small_region)
        big = self.space.ordered(big_region)
        if not set(small) <= set(big):
            raise NetError("extension source is not a subregion")
        small_axis = self.binding_axis(small)
        if len(vector) != len(small_axis):
            raise NetError("binding vector has the wrong length")
        src = dict(zip(small_axis, vector))
        return [src.get(lab, 0) for lab in self.binding_axis(big)]

    def restrict_token_section(self, vector, big_region, small_region):
        """Coordinate projection along open regions (the token sheaf)."""
        big = self.space.ordered(big_region)
        small = self.space.ordered(small_region)
        if not set(small) <= set(big):
            raise NetError("restriction target is not a subregion")
        big_axis = self.token_axis(big)
        if len(vector) != len(big_axis):
            raise NetError("token vector has the wrong length")
        pos = {lab: i for i, lab in enumerate(big_axis)}
        return [vector[pos[lab]] for lab in self.token_axis(small)]

    def extend_class(self, vector, small_region, big_region):
        """Zero-extension of token vectors, inducing classes forward."""
        small = self.space.ordered(small_region)
        big = self.space.ordered(big_region)
        if not set(small) <= set(big):
            raise NetError("extension source is not a subregion")
        small_axis = self.token_axis(small)
        if len(vector) != len(small_axis):
            raise NetError("token vector has the wrong length")
        src = dict(zip(small_axis, vector))
        return [src.get(lab, 0) for lab in self.token_axis(big)]

    # -- subnets ----------------------------------------------------------

    def subnet(self, region, name=None):
        """The induced net on a subset of nodes (weights outside dropped)."""
        region = self.space.ordered(region)
        keep = set(region)
        if not (keep & set(self.space.places) and keep & set(self.space.transitions)):
            raise NetError("subnet needs at least one place and one transition")
        sub_space = self.space.subspace(region)
        wm = {k: v for k, v in self._wm.items() if k[0] in keep and k[2] in keep}
        wp = {k: v for k, v in self._wp.items() if k[0] in keep and k[2] in keep}
        return ColouredNet(
            sub_space,
            {t: self.bindings[t] for t in sub_space.transitions},
            {p: self.tokens[p] for p in sub_space.places},
            wm,
            wp,
            strict=self.strict,
            ring=self.ring,
            name=name or f"{self.name}-sub",
        )

    def __repr__(self):
        return (
            f"ColouredNet({self.name!r}, {len(self.space.places)} places, "
            f"{len(self.space.transitions)} transitions, "
            f"{'strict' if self.strict else 'relaxed'})"
        )


class FlowModule:
    """The flows of a closed region, with their canonical basis."""

    __slots__ = ("net", "region", "matrix", "ring", "module")

    def __init__(self, net, region, matrix, ring, module):
        self.net = net
        self.region = region
        self.matrix = matrix
        self.ring = ring
        self.module = module

    @property
    def axis(self):
        return self.matrix.col_labels

    @property
    def rank(self):
        return self.module.rank

    @property
    def basis(self):
        return self.module.basis

    def contains(self, vector):
        if len(vector) != len(self.axis):
            raise NetError("flow vector has the wrong length")
        return list(vector) in self.module

    def same_module(self, vectors):
        """Do the given vectors span exactly this module?"""
        n = len(self.axis)
        if self.ring == "Z":
            return la.Lattice(n, vectors) == self.module
        return la.Subspace(n, vectors) == self.module

    def __repr__(self):
        return f"FlowModule(region={list(self.region)!r}, rank={self.rank})"


class ClassModule:
    """Marking classes of an open region (cokernel of the incidence)."""

    __slots__ = ("net", "region", "matrix", "ring", "quotient")

    def __init__(self, net, region, matrix, ring, quotient):
        self.net = net
        self.region = region
        self.matrix = matrix
        self.ring = ring
        self.quotient = quotient

    @property
    def axis(self):
        return self.matrix.row_labels

    @property
    def rank(self):
        return self.quotient.rank

    @property
    def invariant_factors(self):
        return self.quotient.invariant_factors

    @property
    def torsion(self):
        return self.quotient.torsion

    def class_of(self, vector):
        if len(vector) != len(self.axis):
            raise NetError("token vector has the wrong length")
        return self.quotient.reduce(list(vector))

    def class_equal(self, v, w):
        return self.class_of(v) == self.class_of(w)

    def is_zero_class(self, v):
        return self.quotient.is_zero_class(list(v))

    def __repr__(self):
        return f"ClassModule(region={list(self.region)!r}, rank={self.rank})"


# ---------------------------------------------------------------------------
# ordinary place/transition nets


def place_transition_net(
    name, places, transitions, consume, produce, strict=True, ring="Z"
):
    """Build a net where every node carries a single colour/binding.

    ``consume``/``produce`` map transition -> {place: weight}.  The single
    binding of ``t`` is named ``t`` and the single token of ``p`` is named
    ``p``, which keeps merged-place token axes readable.
    """
    adjacency = set()
    for t, row in list(consume.items()) + list(produce.items()):
        for p, wgt in row.items():
            if wgt:
                adjacency.add((p, t))
    space = PetriSpace(
        [(p, Sort.PLACE) for p in places] + [(t, Sort.TRANSITION) for t in transitions],
        adjacency,
    )
    wm = {
        (t, t, p, p): wgt
        for t, row in consume.items()
        for p, wgt in row.items()
        if wgt
    }
    wp = {
        (t, t, p, p): wgt
        for t, row in produce.items()
        for p, wgt in row.items()
        if wgt
    }
    return ColouredNet(
        space,
        {t: (t,) for t in space.transitions},
        {p: (p,) for p in space.places},
        wm,
        wp,
        strict=strict,
        ring=ring,
        name=name,
    )


# ---------------------------------------------------------------------------
# sheaf / cosheaf axioms


@dataclass
class AxiomReport:
    kind: str
    region: tuple
    cover: tuple
    ok: bool
    failures: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def _projection_columns(net, big, small, hook):
    """Matrix of the restriction C(big) -> C(small), columnwise via the hook."""
    big_axis = net.token_axis(big)
    cols = []
    for k in range(len(big_axis)):
        unit = [0] * len(big_axis)
        unit[k] = 1
        cols.append(hook(unit, big, small))
    small_len = len(net.token_axis(small))
    return [[cols[j][i] for j in range(len(big_axis))] for i in range(small_len)]


def verify_token_sheaf(net, region=None, covering=None, restrict=None):
    """Equaliser exactness of the token sheaf on an open covering.

    sections(U) -> prod sections(U_i) must be injective with image exactly
    the families that agree on pairwise intersections.  ``restrict``
    replaces the restriction map (a test hook; the default is the honest
    coordinate projection).
    """
    region = tuple(net.space.nodes) if region is None else net.space.ordered(region)
    if not net.space.is_open(region):
        return AxiomReport("token-sheaf", region, (), False, ["region is not open"])
    if covering is None:
        covering = [net.space.basic_open(x) for x in region]
    covering = [net.space.ordered(c) for c in covering]
    failures = []
    for c in covering:
        if not net.space.is_open(c):
            failures.append(f"cover element {list(c)} is not open")
        if not set(c) <= set(region):
            failures.append(f"cover element {list(c)} leaves the region")
    union = set().union(*map(set, covering)) if covering else set()
    if union != set(region):
        failures.append("cover does not exhaust the region")
    if failures:
        return AxiomReport("token-sheaf", region, tuple(covering), False, failures)

    hook = restrict or (lambda vec, big, small: net.restrict_token_section(vec, big, small))
    n = len(net.token_axis(region))
    # r stacks the restrictions to the cover
    r_blocks = [_projection_columns(net, region, c, hook) for c in covering]
    r = [row for block in r_blocks for row in block]
    # d takes signed differences on pairwise overlaps
    d_rows = []
    offsets = []
    off = 0
    for c in covering:
        offsets.append(off)
        off += len(net.token_axis(c))
    total = off
    for (i, ci), (j, cj) in combinations(list(enumerate(covering)), 2):
        overlap = net.space.ordered(set(ci) & set(cj))
        if not overlap:
            continue
        pi = _projection_columns(net, ci, overlap, hook)
        pj = _projection_columns(net, cj, overlap, hook)
        for k in range(len(net.token_axis(overlap))):
            row = [0] * total
            for col in range(len(net.token_axis(ci))):
                row[offsets[i] + col] += pi[k][col]
            for col in range(len(net.token_axis(cj))):
                row[offsets[j] + col] -= pj[k][col]
            d_rows.append(row)

    if net.ring == "Z":
        injective = la.kernel_lattice(r, n).rank == 0
        image = la.Lattice(total, [[r[i][j] for i in range(total)] for j in range(n)])
        kernel = la.kernel_lattice(d_rows, total) if d_rows else la.Lattice(total, la.identity(total))
    else:
        injective = len(la.rat_kernel_basis(r, n)) == 0
        image = la.Subspace(total, [[r[i][j] for i in range(total)] for j in range(n)])
        kernel = (
            la.rat_kernel_subspace(d_rows, total)
            if d_rows
            else la.Subspace(total, la.identity(total))
        )
    if not injective:
        failures.append("restriction to the cover is not injective")
    if image != kernel:
        failures.append("image of sections differs from the agreeing families")
    return AxiomReport("token-sheaf", region, tuple(covering), not failures, failures)


def verify_binding_cosheaf(net, region=None, covering=None, extend=None):
    """Coequaliser exactness of the binding cosheaf on a closed covering.

    prod sections(A_i) -> sections(A) must be surjective with kernel exactly
    the signed overlap images.  ``extend`` is the test hook; the default is
    honest extension by zero.
    """
    region = tuple(net.space.nodes) if region is None else net.space.ordered(region)
    if not net.space.is_closed(region):
        return AxiomReport("binding-cosheaf", region, (), False, ["region is not closed"])
    if covering is None:
        covering = [net.space.basic_closed(x) for x in region]
    covering = [net.space.ordered(c) for c in covering]
    failures = []
    for c in covering:
        if not net.space.is_closed(c):
            failures.append(f"cover element {list(c)} is not closed")
        if not set(c) <= set(region):
            failures.append(f"cover element {list(c)} leaves the region")
    union = set().union(*map(set, covering)) if covering else set()
    if union != set(region):
        failures.append("cover does not exhaust the region")
    if failures:
        return AxiomReport("binding-cosheaf", region, tuple(covering), False, failures)

    hook = extend or (lambda vec, small, big: net.extend_binding_section(vec, small, big))

    def extension_columns(small, big):
        small_axis = net.binding_axis(small)
        cols = []
        for k in range(len(small_axis)):
            unit = [0] * len(small_axis)
            unit[k] = 1
            cols.append(hook(unit, small, big))
        big_len = len(net.binding_axis(big))
        return [[cols[j][i] for j in range(len(small_axis))] for i in range(big_len)]

    n = len(net.binding_axis(region))
    offsets = []
    off = 0
    for c in covering:
        offsets.append(off)
        off += len(net.binding_axis(c))
    total = off
    # e: sum of extensions, as an n x total matrix
    e = [[0] * total for _ in range(n)]
    for idx, c in enumerate(covering):
        block = extension_columns(c, region)
        for i in range(n):
            for j in range(len(net.binding_axis(c))):
                e[i][offsets[idx] + j] += block[i][j]
    # d: overlap sections pushed into both cover elements with opposite signs
    d_cols = []
    for (i, ci), (j, cj) in combinations(list(enumerate(covering)), 2):
        overlap = net.space.ordered(set(ci) & set(cj))
        if not overlap:
            continue
        into_i = extension_columns(overlap, ci)
        into_j = extension_columns(overlap, cj)
        for k in range(len(net.binding_axis(overlap))):
            col = [0] * total
            for r_ in range(len(net.binding_axis(ci))):
                col[offsets[i] + r_] += into_i[r_][k]
            for r_ in range(len(net.binding_axis(cj))):
                col[offsets[j] + r_] -= into_j[r_][k]
            d_cols.append(col)

    if net.ring == "Z":
        surjective = la.Lattice(n, [[e[i][j] for i in range(n)] for j in range(total)]).is_full() if n else True
        kernel = la.kernel_lattice(e, total) if n else la.Lattice(total, la.identity(total))
        image = la.Lattice(total, d_cols)
    else:
        surjective = la.Subspace(n, [[e[i][j] for i in range(n)] for j in range(total)]).is_full() if n else True
        kernel = la.rat_kernel_subspace(e, total) if n else la.Subspace(total, la.identity(total))
        image = la.Subspace(total, d_cols)
    if not surjective:
        failures.append("cover sections do not generate the region sections")
    if kernel != image:
        failures.append("kernel of the sum differs from the overlap relations")
    return AxiomReport("binding-cosheaf", region, tuple(covering), not failures, failures)


def verify_flow_gluing(net, region=None, covering=None, ring=None):
    """Equaliser exactness for flows on a closed covering.

    Families of flows on the cover that agree on overlaps must come from a
    unique flow on the region.  Meaningful for strict nets (on relaxed nets
    the restriction maps need not stay inside the flow modules).
    """
    ring = ring or net.ring
    region = tuple(net.space.nodes) if region is None else net.space.ordered(region)
    if not net.space.is_closed(region):
        return AxiomReport("flow-gluing", region, (), False, ["region is not closed"])
    if covering is None:
        covering = [net.space.basic_closed(x) for x in region]
    covering = [net.space.ordered(c) for c in covering]
    failures = []
    for c in covering:
        if not net.space.is_closed(c):
            failures.append(f"cover element {list(c)} is not closed")
        if not set(c) <= set(region):
            failures.append(f"cover element {list(c)} leaves the region")
    union = set().union(*map(set, covering)) if covering else set()
    if union != set(region):
        failures.append("cover does not exhaust the region")
    if failures:
        return AxiomReport("flow-gluing", region, tuple(covering), False, failures)

    global_flows = net.flows(region, ring=ring)
    local = [net.flows(c, ring=ring) for c in covering]
    offsets = []
    off = 0
    for mod in local:
        offsets.append(off)
        off += len(mod.axis)
    total = off

    def family_vector(flow_vec):
        big_axis = net.binding_axis(region)
        pos = {lab: k for k, lab in enumerate(big_axis)}
        out = [0] * total
        for idx, mod in enumerate(local):
            for k, lab in enumerate(mod.axis):
                out[offsets[idx] + k] = flow_vec[pos[lab]]
        return out

    image_gens = [family_vector(list(b)) for b in global_flows.basis]

    # agreeing families: coefficients over the local bases subject to
    # overlap equalities
    coeff_offsets = []
    coff = 0
    for mod in local:
        coeff_offsets.append(coff)
        coff += len(mod.basis)
    rows = []
    for (i, ci), (j, cj) in combinations(list(enumerate(covering)), 2):
        overlap_axis = [
            lab for lab in net.binding_axis(net.space.ordered(set(ci) & set(cj)))
        ]
        for lab in overlap_axis:
            row = [0] * coff
            ai = dict(zip(local[i].axis, range(len(local[i].axis))))
            aj = dict(zip(local[j].axis, range(len(local[j].axis))))
            for k, b in enumerate(local[i].basis):
                row[coeff_offsets[i] + k] += b[ai[lab]]
            for k, b in enumerate(local[j].basis):
                row[coeff_offsets[j] + k] -= b[aj[lab]]
            rows.append(row)

    def coeffs_to_family(coeffs):
        out = [0] * total
        for idx, mod in enumerate(local):
            for k, b in enumerate(mod.basis):
                c = coeffs[coeff_offsets[idx] + k]
                if c:
                    for pos_, val in enumerate(b):
                        out[offsets[idx] + pos_] += c * val
        return out

    if ring == "Z":
        sol = la.kernel_lattice(rows, coff) if rows else la.Lattice(coff, la.identity(coff))
        agreeing = la.Lattice(total, [coeffs_to_family(list(s)) for s in sol.basis])
        image = la.Lattice(total, image_gens)
    else:
        sol_basis = (
            la.rat_kernel_basis(rows, coff) if rows else [
                [1 if i == j else 0 for i in range(coff)] for j in range(coff)
            ]
        )
        agreeing = la.Subspace(total, [coeffs_to_family(s) for s in sol_basis])
        image = la.Subspace(total, image_gens)
    if image != agreeing:
        failures.append("glued flows differ from the agreeing families")
    return AxiomReport("flow-gluing", region, tuple(covering), not failures, failures)


def basic_covers(space, region=None, kind="open", limit=12):
    """All covers of a region by subfamilies of its basic sets.

    Open covers: each transition lies only in its own basic open, so those
    are forced and the enumeration ranges over the place singletons.  Closed
    covers dually force the place basics and range over the transition
    singletons.  Guarded for test-sized regions.
    """
    region = tuple(space.nodes) if region is None else space.ordered(region)
    region_set = set(region)
    if kind == "open":
        if not space.is_open(region):
            raise NetError("basic open covers need an open region")
        forced = [space.basic_open(t) for t in region if space.sort_of(t) is Sort.TRANSITION]
        optional = [x for x in region if space.sort_of(x) is Sort.PLACE]
        basic = space.basic_open
    elif kind == "closed":
        if not space.is_closed(region):
            raise NetError("basic closed covers need a closed region")
        forced = [space.basic_closed(p) for p in region if space.sort_of(p) is Sort.PLACE]
        optional = [x for x in region if space.sort_of(x) is Sort.TRANSITION]
        basic = space.basic_closed
    else:
        raise NetError(f"unknown cover kind {kind!r}")
    if len(optional) > limit:
        raise NetError("too many optional basics to enumerate covers")
    covered = set().union(*map(set, forced)) if forced else set()
    out = []
    for r in range(len(optional) + 1):
        for extra in combinations(optional, r):
            chosen = [basic(x) for x in extra]
            union = covered.union(*map(set, chosen)) if chosen else set(covered)
            if union == region_set:
                family = forced + chosen
                out.append(tuple(space.ordered(c) for c in family))
    return out

"""Morphisms of coloured nets.

A morphism is a continuous node map together with linear data on the
canonical basis regions of the target:

* per image transition ``a``: a basis of the flows of the closed fibre over
  ``a`` and the image of each basis flow as a binding combination of ``a``,
* per image place ``u``: the image of every token on the open fibre over
  ``u`` as a token combination of ``u``.

Everything else (flow maps over place closures, class maps over transition
neighbourhoods, marking transport) is induced, and ``verify`` checks the
induction is possible, in a fixed clause order, stopping at the first hard
failure.  Clause identifiers are stable strings used by reports and the CLI.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import intlinalg as la
from .net import ColouredNet, NetError
from .topology import SpaceMap, Sort, quotient_by_pairs

CLAUSE_CONTINUITY = "continuity"
CLAUSE_FLOW_BASIS = "flow-basis"
CLAUSE_FLOW_EXTENDS = "flow-map-extends"
CLAUSE_MARK_DEFINED = "mark-map-defined"
CLAUSE_CLASS_TRANSPORT = "class-transport"
CLAUSE_SIGNEDNESS = "signedness"
CLAUSE_INCIDENCE = "incidence-compat"

CLAUSE_ORDER = (
    CLAUSE_CONTINUITY,
    CLAUSE_FLOW_BASIS,
    CLAUSE_FLOW_EXTENDS,
    CLAUSE_MARK_DEFINED,
    CLAUSE_CLASS_TRANSPORT,
    CLAUSE_SIGNEDNESS,
    CLAUSE_INCIDENCE,
)


class MorphismError(ValueError):
    """Malformed morphism data or use of an unverified morphism."""


@dataclass(frozen=True)
class ClauseResult:
    clause: str
    status: str  # "ok" | "failed" | "inconclusive"
    detail: str = ""

    @property
    def ok(self):
        return self.status == "ok"


@dataclass
class VerificationReport:
    morphism_name: str
    clauses: list = field(default_factory=list)

    @property
    def status(self):
        if any(c.status == "failed" for c in self.clauses):
            return "failed"
        if any(c.status == "inconclusive" for c in self.clauses):
            return "inconclusive"
        return "ok"

    @property
    def ok(self):
        return self.status == "ok"

    def __bool__(self):
        return self.ok

    @property
    def first_failure(self):
        for c in self.clauses:
            if c.status == "failed":
                return c
        return None

    def clause(self, name):
        for c in self.clauses:
            if c.clause == name:
                return c
        return None


@dataclass(frozen=True)
class Classification:
    abstraction: bool
    embedding: bool
    discrete: bool
    modification: object  # True | False | "inconclusive"
    place_modification: object
    transition_modification: object

    def as_dict(self):
        return {
            "abstraction": self.abstraction,
            "embedding": self.embedding,
            "discrete": self.discrete,
            "modification": self.modification,
            "place-modification": self.place_modification,
            "transition-modification": self.transition_modification,
        }


def _coeff(ring, value):
    f = Fraction(value)
    if ring == "Z":
        if f.denominator != 1:
            raise MorphismError(f"non-integer coefficient {value!r} in an integer morphism")
        return int(f)
    return f


def _as_vector(data, axis, ring, what):
    if isinstance(data, dict):
        extra = set(data) - set(axis)
        if extra:
            raise MorphismError(f"{what}: unknown labels {sorted(extra, key=str)!r}")
        return tuple(_coeff(ring, data.get(lab, 0)) for lab in axis)
    data = list(data)
    if len(data) != len(axis):
        raise MorphismError(f"{what}: expected length {len(axis)}, got {len(data)}")
    return tuple(_coeff(ring, x) for x in data)


def _columns(vectors, dim):
    """Matrix whose columns are the given vectors of length dim."""
    return [[v[i] for v in vectors] for i in range(dim)]


class NetMorphism:
    """Node map plus canonical-basis flow and mark data between two nets."""

    def __init__(self, source, target, node_map, flow_maps, mark_maps, ring=None, name="f"):
        if not isinstance(source, ColouredNet) or not isinstance(target, ColouredNet):
            raise MorphismError("source and target must be coloured nets")
        self.source = source
        self.target = target
        self.name = name
        self.ring = ring or ("Q" if "Q" in (source.ring, target.ring) else "Z")
        if self.ring not in ("Z", "Q"):
            raise MorphismError(f"ring must be 'Z' or 'Q', got {ring!r}")
        if isinstance(node_map, SpaceMap):
            self.space_map = node_map
        else:
            self.space_map = SpaceMap(source.space, target.space, node_map)

        image = set(self.space_map.mapping.values())
        image_transitions = [a for a in target.space.transitions if a in image]
        image_places = [u for u in target.space.places if u in image]

        flow_maps = dict(flow_maps)
        if set(flow_maps) != set(image_transitions):
            raise MorphismError(
                f"flow data must cover exactly the image transitions {image_transitions!r}"
            )
        self.flow_maps = {}
        for a in image_transitions:
            fibre_axis = source.binding_axis(self.space_map.fibre(a))
            target_axis = target.bindings[a]
            raw = flow_maps[a]
            pairs = list(raw.items()) if isinstance(raw, dict) else list(raw)
            basis, images = [], []
            for vec, img in pairs:
                basis.append(_as_vector(vec, fibre_axis, self.ring, f"flow basis over {a}"))
                images.append(_as_vector(img, target_axis, self.ring, f"flow image over {a}"))
            self.flow_maps[a] = (tuple(basis), tuple(images))

        mark_maps = dict(mark_maps)
        if set(mark_maps) != set(image_places):
            raise MorphismError(
                f"mark data must cover exactly the image places {image_places!r}"
            )
        self.mark_maps = {}
        for u in image_places:
            fibre_tokens = source.token_axis(self.space_map.fibre(u))
            target_axis = target.tokens[u]
            raw = dict(mark_maps[u])
            if set(raw) != set(fibre_tokens):
                raise MorphismError(
                    f"mark data over {u!r} must cover exactly the fibre tokens "
                    f"{list(fibre_tokens)!r}"
                )
            self.mark_maps[u] = {
                lab: _as_vector(raw[lab], target_axis, self.ring, f"mark image of {lab}")
                for lab in fibre_tokens
            }

        self._report = None
        self._rewrites = None  # per image transition: fibre token -> target token vector
        self._transport = None  # target token axis x source token axis

    # -- ring helpers ------------------------------------------------------

    def _module(self, dim, vectors):
        if self.ring == "Z":
            return la.Lattice(dim, vectors)
        return la.Subspace(dim, vectors)

    def _solve(self, vectors, dim, vec):
        m = _columns(vectors, dim)
        if self.ring == "Z":
            return la.solve_columns(m, list(vec), cols=len(vectors))
        return la.rat_solve_columns(m, list(vec), cols=len(vectors))

    def _kernel(self, vectors, dim):
        m = _columns(vectors, dim)
        if self.ring == "Z":
            return [list(b) for b in la.kernel_lattice(m, len(vectors)).basis]
        return [list(b) for b in la.rat_kernel_basis(m, cols=len(vectors))]

    # -- induced pieces ----------------------------------------------------

    def image_transitions(self):
        img = set(self.space_map.mapping.values())
        return tuple(a for a in self.target.space.transitions if a in img)

    def image_places(self):
        img = set(self.space_map.mapping.values())
        return tuple(u for u in self.target.space.places if u in img)

    def flow_image(self, a, vector):
        """Image of a fibre flow over ``a`` as a binding vector of ``a``."""
        basis, images = self.flow_maps[a]
        fibre_axis = self.source.binding_axis(self.space_map.fibre(a))
        if len(vector) != len(fibre_axis):
            raise MorphismError("fibre flow vector has the wrong length")
        if not basis:
            if any(vector):
                raise MorphismError("nonzero flow over an empty basis")
            return tuple(0 for _ in self.target.bindings[a])
        coords = self._solve(basis, len(fibre_axis), vector)
        if coords is None:
            raise MorphismError(f"vector is not in the span of the flow basis over {a!r}")
        out = [0] * len(self.target.bindings[a])
        for c, img in zip(coords, images):
            if c:
                for i, x in enumerate(img):
                    out[i] += c * x
        return tuple(out)

    def induced_flow_family(self, region):
        """The induced flow map on a closed target region.

        Returns ``(region_axis, mapper)``; the mapper takes a flow on the
        preimage and produces its component family over the region bindings,
        raising if some fibre restriction fails to be a flow.
        """
        region = self.target.space.ordered(region)
        if not self.target.space.is_closed(region):
            raise MorphismError("induced flow families live on closed regions")
        pre = self.space_map.preimage(region)
        pre_axis = self.source.binding_axis(pre)
        pre_index = {lab: i for i, lab in enumerate(pre_axis)}
        out_axis = self.target.binding_axis(region)
        fibre_data = []
        for a in self.target.space.transitions_in(region):
            if a not in self.flow_maps:
                continue
            fibre = self.space_map.fibre(a)
            fibre_axis = self.source.binding_axis(fibre)
            flows = self.source.flows(fibre, ring=self.ring)
            fibre_data.append((a, fibre_axis, flows))

        def mapper(vector):
            if len(vector) != len(pre_axis):
                raise MorphismError("flow vector has the wrong length")
            out = {}
            for a, fibre_axis, flows in fibre_data:
                restricted = [vector[pre_index[lab]] for lab in fibre_axis]
                if not flows.contains(restricted):
                    raise NetError(f"restriction to the fibre over {a!r} is not a flow")
                img = self.flow_image(a, restricted)
                for b_name, val in zip(self.target.bindings[a], img):
                    out[(a, b_name)] = val
            return tuple(out.get(lab, 0) for lab in out_axis)

        return out_axis, mapper

    # -- verification --------------------------------------------------------

    def verify(self, hilbert_guard=10_000):
        if self._report is not None:
            return self._report
        report = VerificationReport(self.name)
        self._report = report

        def fail(clause, detail):
            report.clauses.append(ClauseResult(clause, "failed", detail))

        def passed(clause, detail=""):
            report.clauses.append(ClauseResult(clause, "ok", detail))

        # 1. continuity
        if not self.space_map.is_continuous():
            fail(CLAUSE_CONTINUITY, "node map is not continuous")
            return report
        passed(CLAUSE_CONTINUITY)

        src, tgt = self.source, self.target

        # 2. the supplied vectors form a basis of the fibre flows
        for a in self.image_transitions():
            fibre = self.space_map.fibre(a)
            flows = src.flows(fibre, ring=self.ring)
            basis, _ = self.flow_maps[a]
            for vec in basis:
                if not flows.contains(list(vec)):
                    fail(
                        CLAUSE_FLOW_BASIS,
                        f"vector {list(vec)} is not a flow of the fibre over {a!r}",
                    )
                    return report
            if len(basis) != flows.rank:
                fail(
                    CLAUSE_FLOW_BASIS,
                    f"fibre over {a!r} has flow rank {flows.rank}, "
                    f"got {len(basis)} basis vectors",
                )
                return report
            if basis and not flows.same_module([list(v) for v in basis]):
                fail(CLAUSE_FLOW_BASIS, f"vectors do not span the fibre flows over {a!r}")
                return report
        passed(CLAUSE_FLOW_BASIS)

        # 3. induced flow maps on place closures stay flows
        for u in self.image_places():
            region = tgt.space.ordered(tgt.space.basic_closed(u))
            pre = self.space_map.preimage(region)
            try:
                _, mapper = self.induced_flow_family(region)
                target_flows = tgt.flows(region, ring=self.ring)
                for phi in src.flows(pre, ring=self.ring).basis:
                    family = mapper(list(phi))
                    if not target_flows.contains(list(family)):
                        fail(
                            CLAUSE_FLOW_EXTENDS,
                            f"image family of {list(phi)} violates the balance at {u!r}",
                        )
                        return report
            except (MorphismError, NetError) as exc:
                fail(CLAUSE_FLOW_EXTENDS, f"over {u!r}: {exc}")
                return report
        passed(CLAUSE_FLOW_EXTENDS)

        # 4a. mark maps kill the fibre relations (the target is free over {u})
        for u in self.image_places():
            fibre = self.space_map.fibre(u)
            fibre_tokens = src.token_axis(fibre)
            mm = self.mark_maps[u]
            tgt_dim = len(tgt.tokens[u])
            for t, b in src.binding_axis(fibre):
                col = src.binding_effect(t, b, fibre)
                out = [0] * tgt_dim
                for val, lab in zip(col, fibre_tokens):
                    if val:
                        for i, x in enumerate(mm[lab]):
                            out[i] += val * x
                if any(out):
                    fail(
                        CLAUSE_MARK_DEFINED,
                        f"binding {t}.{b} has nonzero image {out} in the tokens of {u!r}",
                    )
                    return report
        passed(CLAUSE_MARK_DEFINED)

        # 4b. class transport over each transition neighbourhood
        rewrites = {}
        for a in self.image_transitions():
            result = self._class_transport(a)
            if isinstance(result, str):
                fail(CLAUSE_CLASS_TRANSPORT, result)
                return report
            rewrites[a] = result
        self._rewrites = rewrites
        passed(CLAUSE_CLASS_TRANSPORT)

        # 5. signedness of the supplied data
        signed_status, signed_detail = "ok", ""
        for u in self.image_places():
            for lab, vec in self.mark_maps[u].items():
                if any(x < 0 for x in vec):
                    fail(CLAUSE_SIGNEDNESS, f"mark image of {lab} has a negative entry")
                    return report
        for a in self.image_transitions():
            fibre = self.space_map.fibre(a)
            fibre_axis = src.binding_axis(fibre)
            mat = src.incidence_matrix(fibre)
            try:
                gens = la.hilbert_basis(
                    mat.as_lists(), cols=len(fibre_axis), guard=hilbert_guard
                )
            except la.ResourceLimitExceeded:
                signed_status = "inconclusive"
                signed_detail = f"hilbert basis over {a!r} exceeded the guard"
                continue
            for g in gens:
                img = self.flow_image(a, list(g))
                if any(x < 0 for x in img):
                    fail(
                        CLAUSE_SIGNEDNESS,
                        f"non-negative fibre flow {list(g)} maps to {list(img)}",
                    )
                    return report
        report.clauses.append(ClauseResult(CLAUSE_SIGNEDNESS, signed_status, signed_detail))

        # 6. incidence compatibility on every image (transition, place) pair
        for a in self.image_transitions():
            fibre_axis = src.binding_axis(self.space_map.fibre(a))
            basis, images = self.flow_maps[a]
            for u in self.image_places():
                u_fibre = self.space_map.fibre(u)
                u_tokens = src.token_axis(u_fibre)
                mm = self.mark_maps[u]
                tgt_dim = len(tgt.tokens[u])
                for kind in ("minus", "plus"):
                    for vec, img in zip(basis, images):
                        lhs = [0] * tgt_dim
                        for coeff, (s, b) in zip(vec, fibre_axis):
                            if not coeff:
                                continue
                            col = src.binding_effect(s, b, u_fibre, kind=kind)
                            for val, lab in zip(col, u_tokens):
                                if val:
                                    for i, x in enumerate(mm[lab]):
                                        lhs[i] += coeff * val * x
                        rhs = [0] * tgt_dim
                        for coeff, b_name in zip(img, tgt.bindings[a]):
                            if not coeff:
                                continue
                            for i, c_name in enumerate(tgt.tokens[u]):
                                w = (
                                    tgt.w_minus(a, b_name, u, c_name)
                                    if kind == "minus"
                                    else tgt.w_plus(a, b_name, u, c_name)
                                )
                                if w:
                                    rhs[i] += coeff * w
                        if lhs != rhs:
                            sign = "-" if kind == "minus" else "+"
                            fail(
                                CLAUSE_INCIDENCE,
                                f"w{sign} mismatch over ({a!r}, {u!r}): fibre side "
                                f"{lhs} vs image side {rhs}",
                            )
                            return report
        passed(CLAUSE_INCIDENCE)
        return report

    def _class_transport(self, a):
        """Images for tokens on places inside the fibre over ``a``.

        Solves each such token as a combination of place-fibre tokens and
        region relations inside the transition neighbourhood; returns a dict
        token label -> vector over the full target token axis, or an error
        string when the transport does not exist.
        """
        src, tgt = self.source, self.target
        region = self.space_map.preimage(tgt.space.basic_open(a))
        ambient = src.token_axis(region)
        dim = len(ambient)
        tgt_places = tgt.space.places_in(tgt.space.basic_open(a))
        tgt_axis = [(u, c) for u in tgt_places for c in tgt.tokens[u]]
        tgt_index = {lab: i for i, lab in enumerate(tgt_axis)}
        tdim = len(tgt_axis)

        p_vectors, p_targets = [], []
        t_labels = []
        for i, (p, c) in enumerate(ambient):
            fp = self.space_map(p)
            if tgt.space.sort_of(fp) is Sort.PLACE:
                unit = [0] * dim
                unit[i] = 1
                p_vectors.append(unit)
                target = [0] * tdim
                for val, c2 in zip(self.mark_maps[fp][(p, c)], tgt.tokens[fp]):
                    target[tgt_index[(fp, c2)]] = val
                p_targets.append(target)
            else:
                t_labels.append((i, (p, c)))
        r_vectors = [
            src.binding_effect(s, b, region) for s, b in src.binding_axis(region)
        ]
        columns = p_vectors + r_vectors
        targets = p_targets + [[0] * tdim for _ in r_vectors]

        relations = [[tgt.w(a, b, u, c) for u, c in tgt_axis] for b in tgt.bindings[a]]
        s_module = self._module(tdim, relations)

        # well-definedness: vanishing combinations must map into the relations
        for ker_vec in self._kernel(columns, dim) if columns else []:
            image = [0] * tdim
            for coeff, tvec in zip(ker_vec, targets):
                if coeff:
                    for i, x in enumerate(tvec):
                        image[i] += coeff * x
            if image not in s_module:
                return (
                    f"transport over {a!r} is inconsistent: a vanishing combination "
                    f"maps to {image}, outside the relations"
                )

        full_axis = tgt.token_axis()
        out = {}
        for idx, lab in t_labels:
            unit = [0] * dim
            unit[idx] = 1
            coords = self._solve(columns, dim, unit) if columns else None
            if coords is None:
                return (
                    f"transport over {a!r} is underdetermined: token {lab} is not "
                    "generated by the place-fibre tokens and the region relations"
                )
            image = [0] * tdim
            for coeff, tvec in zip(coords, targets):
                if coeff:
                    for i, x in enumerate(tvec):
                        image[i] += coeff * x
            placed = {lab2: val for lab2, val in zip(tgt_axis, image)}
            out[lab] = tuple(placed.get(lab2, 0) for lab2 in full_axis)
        return out

    # -- marking transport -----------------------------------------------

    def require_verified(self):
        report = self.verify()
        if report.status == "failed":
            bad = report.first_failure
            raise MorphismError(
                f"morphism {self.name!r} failed verification at clause "
                f"{bad.clause!r}: {bad.detail}"
            )
        return report

    def marking_transport(self):
        """Matrix of the induced linear map on token vectors.

        Rows run over the target token axis, columns over the source token
        axis.  Tokens on place fibres go through the mark data; tokens on
        places inside transition fibres go through the class transport.
        """
        if self._transport is not None:
            return self._transport
        self.require_verified()
        src, tgt = self.source, self.target
        src_axis = src.token_axis()
        tgt_axis = tgt.token_axis()
        tpos = {lab: i for i, lab in enumerate(tgt_axis)}
        cols = []
        for p, c in src_axis:
            fp = self.space_map(p)
            col = [0] * len(tgt_axis)
            if tgt.space.sort_of(fp) is Sort.PLACE:
                for val, c2 in zip(self.mark_maps[fp][(p, c)], tgt.tokens[fp]):
                    col[tpos[(fp, c2)]] = val
            else:
                col = list(self._rewrites[fp][(p, c)])
            cols.append(col)
        self._transport = [
            [cols[j][i] for j in range(len(src_axis))] for i in range(len(tgt_axis))
        ]
        return self._transport

    def map_marking(self, values):
        """Push a token vector forward; entries may leave N in general."""
        transport = self.marking_transport()
        if len(values) != len(self.source.token_axis()):
            raise MorphismError("marking vector has the wrong length")
        return [sum(row[j] * values[j] for j in range(len(values))) for row in transport]

    # -- classification ----------------------------------------------------

    def classify(self, hilbert_guard=10_000, search_bound=6):
        self.require_verified()
        src, tgt = self.source, self.target
        sm = self.space_map

        def flow_component_full(a):
            _, images = self.flow_maps[a]
            dim = len(tgt.bindings[a])
            return self._module(dim, [list(v) for v in images]).is_full()

        def mark_component_full(u):
            dim = len(tgt.tokens[u])
            return self._module(dim, [list(v) for v in self.mark_maps[u].values()]).is_full()

        abstraction = (
            sm.is_surjective()
            and all(flow_component_full(a) for a in self.image_transitions())
            and all(mark_component_full(u) for u in self.image_places())
        )

        def flow_component_injective(a):
            basis, images = self.flow_maps[a]
            if not basis:
                return True
            return not self._kernel([list(v) for v in images], len(tgt.bindings[a]))

        def mark_component_injective(u):
            fibre = sm.fibre(u)
            fibre_tokens = src.token_axis(fibre)
            mm = self.mark_maps[u]
            cols = [list(mm[lab]) for lab in fibre_tokens]
            kernel = self._kernel(cols, len(tgt.tokens[u]))
            rel_cols = [
                src.binding_effect(t, b, fibre) for t, b in src.binding_axis(fibre)
            ]
            rel = self._module(len(fibre_tokens), rel_cols)
            return all(list(k) in rel for k in kernel)

        embedding = (
            sm.is_embedding()
            and all(flow_component_injective(a) for a in self.image_transitions())
            and all(mark_component_injective(u) for u in self.image_places())
        )

        discrete = sm.is_discrete()
        modification = self._modification_status(search_bound)
        singleton_t = all(len(sm.fibre(a)) == 1 for a in self.image_transitions())
        singleton_p = all(len(sm.fibre(u)) == 1 for u in self.image_places())

        def refine(flag):
            if modification is True and flag:
                return True
            if modification == "inconclusive" and flag:
                return "inconclusive"
            return False

        return Classification(
            abstraction=abstraction,
            embedding=embedding,
            discrete=discrete,
            modification=modification,
            place_modification=refine(singleton_t),
            transition_modification=refine(singleton_p),
        )

    def _modification_status(self, search_bound):
        """Surjective discrete map whose components are signed isomorphisms."""
        src, tgt = self.source, self.target
        sm = self.space_map
        if not (sm.is_surjective() and sm.is_discrete()):
            return False
        inconclusive = False
        for a in self.image_transitions():
            basis, images = self.flow_maps[a]
            dim = len(tgt.bindings[a])
            image_vecs = [list(v) for v in images]
            if not self._module(dim, image_vecs).is_full():
                return False
            if basis and self._kernel(image_vecs, dim):
                return False
            # inverse signedness: the preimage of each unit binding must be
            # a non-negative fibre flow
            fibre_axis = src.binding_axis(sm.fibre(a))
            for i in range(dim):
                unit = [0] * dim
                unit[i] = 1
                coords = self._solve(image_vecs, dim, unit)
                if coords is None:
                    return False
                pre = [0] * len(fibre_axis)
                for cval, vec in zip(coords, basis):
                    if cval:
                        for k, x in enumerate(vec):
                            pre[k] += cval * x
                if any(x < 0 for x in pre):
                    return False
        for u in self.image_places():
            fibre = sm.fibre(u)
            fibre_tokens = src.token_axis(fibre)
            mm = self.mark_maps[u]
            dim = len(tgt.tokens[u])
            cols = [list(mm[lab]) for lab in fibre_tokens]
            if not self._module(dim, cols).is_full():
                return False
            kernel = self._kernel(cols, len(fibre_tokens))
            rel_cols = [
                src.binding_effect(t, b, fibre) for t, b in src.binding_axis(fibre)
            ]
            rel = self._module(len(fibre_tokens), rel_cols)
            if not all(list(k) in rel for k in kernel):
                return False
            # inverse signedness on classes: each target token needs a
            # preimage class with a non-negative representative
            m = _columns(cols, dim)
            for i in range(dim):
                unit = [0] * dim
                unit[i] = 1
                x = (
                    la.solve_columns(m, unit, cols=len(cols))
                    if self.ring == "Z"
                    else la.rat_solve_columns(m, unit, cols=len(cols))
                )
                if x is None:
                    return False
                if self.ring == "Z":
                    status = la.nonneg_representative_status(
                        [list(b) for b in rel.basis], list(x), bound=search_bound
                    )
                else:
                    status = "yes" if all(v >= 0 for v in x) else "unknown"
                if status == "no":
                    return False
                if status == "unknown":
                    inconclusive = True
        return "inconclusive" if inconclusive else True

    # -- composition ---------------------------------------------------------

    def then(self, other):
        """Composite morphism, self first; both factors must verify."""
        if other.source is not self.target and (
            other.source.space.nodes != self.target.space.nodes
            or other.source.bindings != self.target.bindings
            or other.source.tokens != self.target.tokens
        ):
            raise MorphismError("morphisms do not compose")
        self.require_verified()
        other.require_verified()
        ring = "Q" if "Q" in (self.ring, other.ring) else "Z"
        node_map = {x: other.space_map(y) for x, y in self.space_map.mapping.items()}
        composed_space = SpaceMap(self.source.space, other.target.space, node_map)
        image = set(node_map.values())

        flow_maps = {}
        for c in other.target.space.transitions:
            if c not in image:
                continue
            mid_region = other.space_map.fibre(c)
            fibre = composed_space.fibre(c)
            flows = self.source.flows(fibre, ring=ring)
            _, mapper = self.induced_flow_family(mid_region)
            entries = []
            for phi in flows.basis:
                mid = mapper(list(phi))
                img = other.flow_image(c, list(mid))
                entries.append((list(phi), list(img)))
            flow_maps[c] = entries

        t1 = self.marking_transport()
        t2 = other.marking_transport()
        src_axis = self.source.token_axis()
        mid_axis = self.target.token_axis()
        out_axis = other.target.token_axis()
        mark_maps = {}
        for u in other.target.space.places:
            if u not in image:
                continue
            fibre_tokens = self.source.token_axis(composed_space.fibre(u))
            table = {}
            for lab in fibre_tokens:
                j = src_axis.index(lab)
                mid_vec = [t1[i][j] for i in range(len(mid_axis))]
                out_vec = [
                    sum(t2[i][k] * mid_vec[k] for k in range(len(mid_axis)))
                    for i in range(len(out_axis))
                ]
                img = []
                for i, (q, _) in enumerate(out_axis):
                    if q == u:
                        img.append(out_vec[i])
                    elif out_vec[i]:
                        raise MorphismError(
                            "composite mark image leaks outside the image place"
                        )
                table[lab] = img
            mark_maps[u] = table

        return NetMorphism(
            self.source,
            other.target,
            node_map,
            flow_maps,
            mark_maps,
            ring=ring,
            name=f"{other.name}.{self.name}",
        )

    def __repr__(self):
        return f"NetMorphism({self.name!r}: {self.source.name!r} -> {self.target.name!r})"


def morphisms_equal(f, g):
    """Same node map and same induced data on the canonical bases.

    Flow maps are compared on the integer kernel basis of each fibre (which
    also spans the rational flows), mark maps entry by entry.
    """
    if f.source.space.nodes != g.source.space.nodes:
        return False
    if f.target.space.nodes != g.target.space.nodes:
        return False
    if f.space_map.mapping != g.space_map.mapping:
        return False
    f.require_verified()
    g.require_verified()
    for a in f.image_transitions():
        flows = f.source.flows(f.space_map.fibre(a), ring="Z")
        for phi in flows.basis:
            left = [Fraction(x) for x in f.flow_image(a, list(phi))]
            right = [Fraction(x) for x in g.flow_image(a, list(phi))]
            if left != right:
                return False
    for u in f.image_places():
        mm_f, mm_g = f.mark_maps[u], g.mark_maps[u]
        if set(mm_f) != set(mm_g):
            return False
        for lab in mm_f:
            if [Fraction(x) for x in mm_f[lab]] != [Fraction(x) for x in mm_g[lab]]:
                return False
    return True


def identity_morphism(net, name=None):
    flow_maps = {}
    for t in net.space.transitions:
        n = len(net.bindings[t])
        units = []
        for i in range(n):
            unit = [0] * n
            unit[i] = 1
            units.append((unit, list(unit)))
        flow_maps[t] = units
    mark_maps = {}
    for p in net.space.places:
        n = len(net.tokens[p])
        table = {}
        for i, c in enumerate(net.tokens[p]):
            unit = [0] * n
            unit[i] = 1
            table[(p, c)] = unit
        mark_maps[p] = table
    return NetMorphism(
        net,
        net,
        {x: x for x in net.space.nodes},
        flow_maps,
        mark_maps,
        ring=net.ring,
        name=name or f"id_{net.name}",
    )


# ---------------------------------------------------------------------------
# Multirelation morphisms of place/transition nets


class WinskelError(ValueError):
    """The multirelation data violates its invariants."""


@dataclass
class WinskelMorphism:
    """A place multirelation plus a partial transition map.

    ``beta`` maps a source place to a multiset of target places (dict with
    positive multiplicities); ``eta`` partially maps transitions to
    transitions.  Nets must carry one token per place and one binding per
    transition.
    """

    source: ColouredNet
    target: ColouredNet
    beta: dict
    eta: dict
    name: str = "w"

    def __post_init__(self):
        for netname, net in (("source", self.source), ("target", self.target)):
            for p in net.space.places:
                if len(net.tokens[p]) != 1:
                    raise WinskelError(f"{netname} is not a place/transition net at {p!r}")
            for t in net.space.transitions:
                if len(net.bindings[t]) != 1:
                    raise WinskelError(f"{netname} is not a place/transition net at {t!r}")
        self.beta = {p: dict(m) for p, m in dict(self.beta).items()}
        self.eta = dict(self.eta)
        for p, multi in self.beta.items():
            if p not in self.source.space.places:
                raise WinskelError(f"beta defined on unknown place {p!r}")
            if not multi:
                raise WinskelError(f"beta({p!r}) is empty; leave it undefined instead")
            for q, k in multi.items():
                if q not in self.target.space.places:
                    raise WinskelError(f"beta({p!r}) hits unknown place {q!r}")
                if k <= 0:
                    raise WinskelError(f"beta({p!r}) has non-positive multiplicity on {q!r}")
        for t, s in self.eta.items():
            if t not in self.source.space.transitions:
                raise WinskelError(f"eta defined on unknown transition {t!r}")
            if s not in self.target.space.transitions:
                raise WinskelError(f"eta({t!r}) hits unknown transition {s!r}")

    def _side(self, net, t, kind):
        out = {}
        b = net.bindings[t][0]
        for p in net.space.places:
            c = net.tokens[p][0]
            w = net.w_minus(t, b, p, c) if kind == "pre" else net.w_plus(t, b, p, c)
            if w:
                out[p] = w
        return out

    def check_invariants(self):
        """beta(pre t) = pre(eta t) and dually for post, as multisets."""
        failures = []
        for t in self.source.space.transitions:
            if t in self.eta:
                for kind in ("pre", "post"):
                    pushed = {}
                    for p, k in self._side(self.source, t, kind).items():
                        if p not in self.beta:
                            failures.append(
                                f"{kind}({t!r}) meets {p!r} outside the domain of beta"
                            )
                            continue
                        for q, m in self.beta[p].items():
                            pushed[q] = pushed.get(q, 0) + k * m
                    want = self._side(self.target, self.eta[t], kind)
                    if pushed != want:
                        failures.append(
                            f"beta({kind}({t!r})) = {pushed} differs from "
                            f"{kind}({self.eta[t]!r}) = {want}"
                        )
            else:
                touching = set(self._side(self.source, t, "pre")) | set(
                    self._side(self.source, t, "post")
                )
                bad = touching & set(self.beta)
                if bad:
                    failures.append(
                        f"eta is undefined on {t!r} but beta meets {sorted(bad)}"
                    )
        return failures


@dataclass
class WinskelResult:
    domain: ColouredNet
    merged: ColouredNet
    projection: NetMorphism  # target -> merged, gluing the shared images
    fold: NetMorphism  # domain subnet -> merged


def from_winskel(w):
    """Turn multirelation data into coloured-net morphisms.

    The domain of the data must be a closed subnet of the source.  Target
    places hit by a common source place are glued; a merged place keeps one
    token per contributing place (renamed after those places), so beta
    becomes the linear mark data of a fold onto the merged net, and the
    gluing itself is a place-level modification.
    """
    failures = w.check_invariants()
    if failures:
        raise WinskelError("; ".join(failures))
    src, tgt = w.source, w.target
    dom_nodes = set(w.beta) | set(w.eta)
    if not dom_nodes:
        raise WinskelError("empty domain")
    if not src.space.is_closed(dom_nodes):
        raise WinskelError("the domain of the data is not closed in the source")
    domain = src.subnet(dom_nodes, name=f"{src.name}-dom")

    pairs = []
    for multi in w.beta.values():
        hits = list(multi)
        pairs.extend((hits[0], q) for q in hits[1:])
    qspace, proj_map = quotient_by_pairs(tgt.space, pairs)

    members = {
        u: [y for y in tgt.space.places if proj_map(y) == u] for u in qspace.places
    }
    # singleton classes keep their token name, merged classes take the
    # contributing place names
    token_name = {}
    for u, ys in members.items():
        for y in ys:
            token_name[y] = tgt.tokens[y][0] if len(ys) == 1 else y
    tokens = {u: tuple(token_name[y] for y in ys) for u, ys in members.items()}
    owner = {(u, token_name[y]): y for u, ys in members.items() for y in ys}
    bindings = {t: tgt.bindings[t] for t in qspace.transitions}
    wm, wp = {}, {}
    for store, out in ((tgt.w_minus, wm), (tgt.w_plus, wp)):
        for t in tgt.space.transitions:
            b = tgt.bindings[t][0]
            for y in tgt.space.places:
                c = tgt.tokens[y][0]
                val = store(t, b, y, c)
                if val:
                    key = (t, b, proj_map(y), token_name[y])
                    out[key] = out.get(key, 0) + val
    merged = ColouredNet(
        qspace,
        bindings,
        tokens,
        wm,
        wp,
        strict=tgt.strict,
        ring=tgt.ring,
        name=f"{tgt.name}-merged",
    )

    proj_flow = {}
    for t in qspace.transitions:
        n = len(tgt.bindings[t])
        units = []
        for i in range(n):
            unit = [0] * n
            unit[i] = 1
            units.append((unit, list(unit)))
        proj_flow[t] = units
    proj_mark = {}
    for u in qspace.places:
        table = {}
        for y in members[u]:
            c = tgt.tokens[y][0]
            table[(y, c)] = [1 if cc == token_name[y] else 0 for cc in merged.tokens[u]]
        proj_mark[u] = table
    projection = NetMorphism(
        tgt,
        merged,
        {x: proj_map(x) for x in tgt.space.nodes},
        proj_flow,
        proj_mark,
        name=f"pi_{w.name}",
    )

    node_map = {}
    for x in domain.space.places:
        classes = {proj_map(q) for q in w.beta[x]}
        if len(classes) != 1:
            raise WinskelError(f"beta({x!r}) spreads over several merged places")
        node_map[x] = classes.pop()
    for t in domain.space.transitions:
        node_map[t] = w.eta[t]
    fold_space = SpaceMap(domain.space, qspace, node_map)

    fold_flow = {}
    for s in {node_map[t] for t in domain.space.transitions}:
        fibre_axis = domain.binding_axis(fold_space.fibre(s))
        entries = []
        for i in range(len(fibre_axis)):
            unit = [0] * len(fibre_axis)
            unit[i] = 1
            entries.append((unit, [1]))
        fold_flow[s] = entries
    fold_mark = {}
    for u in {node_map[x] for x in domain.space.places}:
        table = {}
        for x in fold_space.fibre(u):
            if domain.space.sort_of(x) is not Sort.PLACE:
                continue
            c = domain.tokens[x][0]
            table[(x, c)] = [
                w.beta[x].get(owner[(u, cc)], 0) for cc in merged.tokens[u]
            ]
        fold_mark[u] = table
    fold = NetMorphism(domain, merged, node_map, fold_flow, fold_mark, name=f"g_{w.name}")
    return WinskelResult(domain=domain, merged=merged, projection=projection, fold=fold)

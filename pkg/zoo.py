"""
Constructors for the algebra families: enveloping algebras of Lie superalgebras,
iterated differential operator rings, quantized Weyl algebras, down-up algebras,
the filtered AS-regular algebras of global dimension 2, rank-one symplectic
reflection algebras, tensor products and associated graded algebras.
"""
import logging
import re
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from errors import (AxiomViolation, BetaZero, ConfluenceNotEstablished, DomainMismatch, GradedDimensionMismatch,
                    InvalidQMatrix, NotADerivation, RootsInconsistent, SuperTensorUnsupported, ZeroParameter)
from expressions import parse_poly
from ncpoly import Alphabet, GeneratorInfo, Poly
from presentation import AlgebraHandle, Presentation, Provenance
from rewrite import orient
from scalars import (Domain, DomainKind, Number, Scalar, common_domain, mk_root_of_unity, multiplicative_order,
                     root_of_unity)

logger = logging.getLogger(__name__)

_ZETA_RE = re.compile(r"zeta\s*\(\s*(\d+)\s*\)")

ScalarLike = Union[Number, str]
PolyLike = Union[Poly, str]


def _domain_for(values: Sequence[Optional[ScalarLike]], domain: Optional[Domain]) -> Domain:
    """Smallest domain holding the given parameters; literals contribute the roots of unity they name."""
    scalars = [v for v in values if isinstance(v, Scalar)]
    if domain is None or domain.kind is not DomainKind.PRIME_FIELD:
        for v in values:
            if isinstance(v, str):
                scalars += [mk_root_of_unity(int(n)) for n in _ZETA_RE.findall(v)]
    return common_domain(scalars, default=domain)


def _scalar(value: ScalarLike, domain: Domain) -> Scalar:
    if isinstance(value, str):
        return parse_poly(value, Alphabet([]), domain).constant_term()
    return domain.coerce(value)


def _gens(alphabet: Alphabet, domain: Domain) -> List[Poly]:
    return [Poly.generator(i, domain) for i in range(len(alphabet))]


def polynomial_ring(names: Sequence[str] = ("x", "y"), domain: Optional[Domain] = None) -> Presentation:
    """The commutative polynomial ring k[x_1, ..., x_n] with all generators in weight 1."""
    domain = domain or Domain.rational()
    alphabet = Alphabet.from_names(list(names))
    g = _gens(alphabet, domain)
    relations = [g[j] * g[i] - g[i] * g[j] for j in range(len(g)) for i in range(j)]
    return Presentation(alphabet, relations, domain,
                        Provenance("polynomial_ring", {"generators": ",".join(names)}, gk_dimension=len(names)))


# -- Lie superalgebras ------------------------------------------------------------

def _linear_vector(p: Poly, alphabet: Alphabet, what: str) -> Dict[int, Scalar]:
    vec = {}
    for word, c in p.items():
        if len(word) != 1:
            raise AxiomViolation(f"{what} = {p.to_string(alphabet)} is not a linear combination of generators",
                                 axiom="linearity", bracket=what)
        vec[word[0]] = c
    return vec


def _bracket(u: Dict[int, Scalar], v: Dict[int, Scalar], table: Dict[Tuple[int, int], Dict[int, Scalar]],
             domain: Domain) -> Dict[int, Scalar]:
    out: Dict[int, Scalar] = {}
    for a, ca in u.items():
        for b, cb in v.items():
            for k, c in table.get((a, b), {}).items():
                out[k] = out.get(k, domain.zero()) + ca * cb * c
    return {k: c for k, c in out.items() if c}


def _combine(domain: Domain, *pairs: Tuple[int, Dict[int, Scalar]]) -> Dict[int, Scalar]:
    out: Dict[int, Scalar] = {}
    for sign, vec in pairs:
        for k, c in vec.items():
            out[k] = out.get(k, domain.zero()) + c * sign
    return {k: c for k, c in out.items() if c}


def validate_super_brackets(names: Sequence[str], parities: Sequence[int],
                            table: Dict[Tuple[int, int], Dict[int, Scalar]], domain: Domain) -> None:
    """
    Check parity compatibility, super skew-symmetry and the super Jacobi identity.

    Skew-symmetry is [x,y] = -(-1)^{|x||y|}[y,x]. Raises AxiomViolation naming the
    failing axiom and the basis triple.
    """
    n = len(names)
    for (a, b), vec in table.items():
        for k in vec:
            if parities[k] != (parities[a] + parities[b]) % 2:
                raise AxiomViolation(f"[{names[a]},{names[b]}] has a component along {names[k]} of the wrong parity",
                                     axiom="parity", triple=[a, b, k])
    for a in range(n):
        for b in range(n):
            sign = -1 if parities[a] * parities[b] else 1
            lhs = table.get((a, b), {})
            rhs = {k: -c * sign for k, c in table.get((b, a), {}).items()}
            if _combine(domain, (1, lhs), (-1, rhs)):
                raise AxiomViolation(f"super skew-symmetry fails for [{names[a]},{names[b]}]",
                                     axiom="skew-symmetry", triple=[a, b, None])
    for a in range(n):
        for b in range(n):
            for c in range(n):
                ea, eb, ec = ({a: domain.one()}, {b: domain.one()}, {c: domain.one()})
                s_ac = -1 if parities[a] * parities[c] else 1
                s_ba = -1 if parities[b] * parities[a] else 1
                s_cb = -1 if parities[c] * parities[b] else 1
                total = _combine(domain,
                                 (s_ac, _bracket(ea, _bracket(eb, ec, table, domain), table, domain)),
                                 (s_ba, _bracket(eb, _bracket(ec, ea, table, domain), table, domain)),
                                 (s_cb, _bracket(ec, _bracket(ea, eb, table, domain), table, domain)))
                if total:
                    raise AxiomViolation(f"super Jacobi identity fails for ({names[a]}, {names[b]}, {names[c]})",
                                         axiom="jacobi", triple=[a, b, c])


def enveloping_super(names: Sequence[str], parities: Sequence[int],
                     brackets: Mapping[Tuple[str, str], PolyLike],
                     domain: Optional[Domain] = None) -> Presentation:
    """
    Enveloping algebra of a finite-dimensional Lie superalgebra given by its brackets.

    Brackets not listed are derived by super skew-symmetry, unlisted pairs are zero.
    Relations are x_j x_i - (-1)^{|i||j|} x_i x_j - [x_j, x_i] for j > i, and
    2y^2 - [y, y] for each odd y.
    """
    domain = domain or Domain.rational()
    alphabet = Alphabet.from_names(list(names), parities=list(parities))
    if any(parities) and domain.characteristic == 2:
        raise AxiomViolation("odd generators need a field of characteristic other than 2", axiom="characteristic")
    table: Dict[Tuple[int, int], Dict[int, Scalar]] = {}
    given = set()
    for (left, right), value in brackets.items():
        a, b = alphabet.index(left), alphabet.index(right)
        poly = parse_poly(value, alphabet, domain) if isinstance(value, str) else value
        table[(a, b)] = _linear_vector(poly, alphabet, f"[{left},{right}]")
        given.add((a, b))
    for (a, b) in list(given):
        if (b, a) not in given:
            sign = -1 if parities[a] * parities[b] else 1
            table[(b, a)] = {k: -c * sign for k, c in table[(a, b)].items()}
    table = {key: vec for key, vec in table.items() if vec}
    validate_super_brackets(alphabet.names, alphabet.parities, table, domain)

    g = _gens(alphabet, domain)
    relations = []
    for j in range(len(g)):
        for i in range(j):
            sign = -1 if parities[i] * parities[j] else 1
            bracket = Poly(domain, {(k,): c for k, c in table.get((j, i), {}).items()})
            relations.append(g[j] * g[i] - (g[i] * g[j]).scale(sign) - bracket)
    for y in range(len(g)):
        if parities[y]:
            bracket = Poly(domain, {(k,): c for k, c in table.get((y, y), {}).items()})
            relations.append((g[y] * g[y]).scale(2) - bracket)
    parameters = {f"[{names[a]},{names[b]}]": Poly(domain, {(k,): c for k, c in vec.items()}).to_string(alphabet)
                  for (a, b), vec in sorted(table.items()) if a <= b}
    provenance = Provenance(
        "enveloping_super",
        {"even": ",".join(n for n, p in zip(names, parities) if not p),
         "odd": ",".join(n for n, p in zip(names, parities) if p), **parameters},
        gk_dimension=sum(1 for p in parities if not p),
        notes=["super skew-symmetry is checked as [x,y] = -(-1)^{|x||y|}[y,x]; "
               "the form without the leading minus sign is not satisfied by the pl(1|1) brackets"],
        flags={"skew_sign_convention_differs": True},
    )
    return Presentation(alphabet, relations, domain, provenance)


def pl11(domain: Optional[Domain] = None) -> Presentation:
    """U(pl(1|1)) with PBW order x1 < x2 < y1 < y2."""
    return enveloping_super(["x1", "x2", "y1", "y2"], [0, 0, 1, 1],
                            {("y1", "y2"): "x1", ("x2", "y1"): "y1", ("x2", "y2"): "-y2"}, domain)


# -- differential operator rings ------------------------------------------------------

def _derivation_image(p: Poly, delta: Sequence[Poly], domain: Domain) -> Poly:
    """Extend generator images to the free algebra by the Leibniz rule."""
    result = Poly.zero(domain)
    for word, c in p.items():
        for pos, letter in enumerate(word):
            term = Poly.monomial(word[:pos], domain, c) * delta[letter] * Poly.monomial(word[pos + 1:], domain)
            result = result + term
    return result


def iterated_ore(names: Sequence[str], derivations: Mapping[str, Mapping[str, PolyLike]],
                 domain: Optional[Domain] = None) -> Presentation:
    """
    Iterated differential operator ring k[x_1][x_2; d_2]...[x_n; d_n].

    ``derivations[x_k][x_j]`` is d_k(x_j) for j < k, missing entries are zero.
    The weight of x_k is the largest weight of d_k(x_j), and at least 1.

    Raises:
        NotADerivation: d_k does not annihilate a relation among x_1..x_{k-1}.
    """
    domain = domain or Domain.rational()
    names = list(names)
    scratch = Alphabet.from_names(names)
    index = {name: i for i, name in enumerate(names)}
    for target, row in derivations.items():
        k = scratch.index(target)
        for source in row:
            if scratch.index(source) >= k:
                raise NotADerivation(f"delta({target}, {source}) must have {source} declared before {target}",
                                     generator=target, argument=source)

    weights = [1] * len(names)
    relations: List[Poly] = []
    g = [Poly.generator(i, domain) for i in range(len(names))]
    parameters = {}
    for k in range(1, len(names)):
        row = derivations.get(names[k], {})
        images = []
        for j in range(k):
            value = row.get(names[j], Poly.zero(domain))
            image = parse_poly(value, scratch, domain) if isinstance(value, str) else value
            if any(i >= k for i in image.generators_used()):
                raise NotADerivation(f"delta({names[k]}, {names[j]}) = {image.to_string(scratch)} uses generators "
                                     f"outside {', '.join(names[:k])}", generator=names[k], argument=names[j])
            images.append(image)
            if image:
                parameters[f"delta({names[k]},{names[j]})"] = image.to_string(scratch)
        partial = Alphabet.from_names(names, weights=weights)
        weights[k] = max([1] + [im.max_weight(partial) for im in images])
        if relations:
            delta = images + [Poly.zero(domain)] * (len(names) - k)
            prior = orient(relations, Alphabet.from_names(names, weights=weights), domain)
            for r_index, relation in enumerate(relations):
                image = prior.normal_form(_derivation_image(relation, delta, domain))
                if image:
                    raise NotADerivation(f"delta_{names[k]} does not preserve relation {r_index} "
                                         f"({relation.to_string(scratch)}): image {image.to_string(scratch)}",
                                         generator=names[k], relation=r_index)
        for j in range(k):
            relations.append(g[k] * g[j] - g[j] * g[k] - images[j])
    alphabet = Alphabet.from_names(names, weights=weights)
    logger.debug(f"Iterated Ore extension on {names} with weights {weights}")
    return Presentation(alphabet, relations, domain,
                        Provenance("iterated_ore", parameters, gk_dimension=len(names),
                                   notes=["weight of x_k is the largest weight of delta_k(x_j), floored at 1"]))


def weyl_algebra(domain: Optional[Domain] = None) -> Presentation:
    """A_1(k): the rule yx -> xy + 1."""
    p = iterated_ore(["x", "y"], {"y": {"x": "1"}}, domain)
    p.provenance.family = "weyl"
    return p


def heisenberg_weyl_quotient(domain: Optional[Domain] = None) -> Presentation:
    """U(Heisenberg) modulo z - 1, whose normal words are those of the Weyl algebra."""
    domain = domain or Domain.rational()
    alphabet = Alphabet.from_names(["x", "y", "z"])
    x, y, z = _gens(alphabet, domain)
    relations = [y * x - x * y - z, z * x - x * z, z * y - y * z, z - 1]
    return Presentation(alphabet, relations, domain,
                        Provenance("heisenberg_quotient", gk_dimension=2,
                                   notes=["homomorphic image of U(Heisenberg) by the central element z - 1"]))


# -- quantized Weyl algebras -------------------------------------------------------

def _q_matrix(n: int, q, domain: Domain) -> List[List[Scalar]]:
    if q is None:
        q = 1
    if isinstance(q, (list, tuple)):
        if len(q) != n or any(len(row) != n for row in q):
            raise InvalidQMatrix(f"q must be an {n}x{n} matrix", n=n)
        matrix = [[_scalar(v, domain) for v in row] for row in q]
    else:
        base = _scalar(q, domain)
        if not base:
            raise ZeroParameter("q must be nonzero", parameter="q")
        matrix = [[domain.one() if i == j else (base if i < j else base.inverse()) for j in range(n)]
                  for i in range(n)]
    for i in range(n):
        for j in range(n):
            if not matrix[i][j]:
                raise ZeroParameter(f"q[{i + 1}][{j + 1}] is zero", parameter=f"q{i + 1}{j + 1}")
        if matrix[i][i] != 1:
            raise InvalidQMatrix(f"q[{i + 1}][{i + 1}] = {matrix[i][i]} must be 1", entry=[i + 1, i + 1])
        for j in range(i + 1, n):
            if matrix[i][j] * matrix[j][i] != 1:
                raise InvalidQMatrix(f"q[{i + 1}][{j + 1}] * q[{j + 1}][{i + 1}] must be 1",
                                     entry=[i + 1, j + 1])
    return matrix


def quantized_weyl(n: int, q=None, gamma=None, domain: Optional[Domain] = None) -> Presentation:
    """
    The quantized Weyl algebra on x_1, y_1, ..., x_n, y_n with deg x_i = deg y_i = i.

    Args:
        n: Number of pairs.
        q: A scalar (q_ij = q for i < j) or an n x n matrix with q_ii = 1, q_ij q_ji = 1.
        gamma: A scalar used for every gamma_i, or a list of n scalars.
        domain: Scalar domain; defaults to the smallest one holding the parameters.

    The precedence y_1 < x_1 < ... < y_n < x_n makes normal words ordered monomials.
    """
    if n < 1:
        raise InvalidQMatrix(f"n must be positive, got {n}", n=n)
    gamma = 1 if gamma is None else gamma
    gammas = list(gamma) if isinstance(gamma, (list, tuple)) else [gamma] * n
    if len(gammas) != n:
        raise InvalidQMatrix(f"gamma needs {n} entries, got {len(gammas)}", n=n)
    flat_q = [v for row in q for v in row] if isinstance(q, (list, tuple)) else [q]
    domain = _domain_for(flat_q + gammas, domain)
    qm = _q_matrix(n, q, domain)
    gs = [_scalar(v, domain) for v in gammas]
    for i, value in enumerate(gs):
        if not value:
            raise ZeroParameter(f"gamma_{i + 1} must be nonzero", parameter=f"gamma{i + 1}")

    names, weights, precedence = [], [], []
    for i in range(1, n + 1):
        names += [f"x{i}", f"y{i}"]
        weights += [i, i]
        precedence += [f"y{i}", f"x{i}"]
    alphabet = Alphabet.from_names(names, weights=weights, precedence=precedence)
    g = _gens(alphabet, domain)
    x = [g[2 * i] for i in range(n)]
    y = [g[2 * i + 1] for i in range(n)]
    relations = []
    for i in range(n):
        for j in range(i + 1, n):
            relations.append(y[i] * y[j] - (y[j] * y[i]).scale(qm[i][j]))
            relations.append(x[i] * y[j] - (y[j] * x[i]).scale(qm[j][i]))
            relations.append(x[i] * x[j] - (x[j] * x[i]).scale(gs[i] * qm[i][j]))
        for j in range(i):
            relations.append(x[i] * y[j] - (y[j] * x[i]).scale(gs[j] * qm[j][i]))
    for j in range(n):
        rel = x[j] * y[j] - 1 - (y[j] * x[j]).scale(gs[j])
        for l in range(j):
            rel = rel - (y[l] * x[l]).scale(gs[l] - 1)
        relations.append(rel)

    parameters = {"n": str(n), "gamma": ",".join(str(v) for v in gs),
                  "q": "; ".join(",".join(str(v) for v in row) for row in qm)}
    scalars = gs + [qm[i][j] for i in range(n) for j in range(n) if i != j]
    provenance = Provenance("quantized_weyl", parameters, scalars=scalars, gk_dimension=2 * n,
                            notes=["deg x_i = deg y_i = i"])
    return Presentation(alphabet, relations, domain, provenance)


# -- down-up algebras ------------------------------------------------------------

def _root_order(s: Scalar) -> Optional[int]:
    if s.domain.kind is DomainKind.CYCLOTOMIC:
        return multiplicative_order(s, 2 * s.domain.modulus)
    return multiplicative_order(s, 2)


def down_up(alpha=None, beta=None, gamma=0, r=None, s=None, domain: Optional[Domain] = None) -> Presentation:
    """
    The down-up algebra A(alpha, beta, gamma) on d < u, both in weight 1.

    Either (alpha, beta) or the roots (r, s) of x^2 - alpha x - beta may be given;
    when both are given they must agree.

    Raises:
        BetaZero: beta = 0.
        RootsInconsistent: r + s != alpha or -rs != beta.
    """
    domain = _domain_for([alpha, beta, gamma, r, s], domain)
    if (r is None) != (s is None):
        raise RootsInconsistent("both roots r and s are needed", r=str(r), s=str(s))
    roots = None
    if r is not None:
        roots = (_scalar(r, domain), _scalar(s, domain))
        from_roots = (roots[0] + roots[1], -(roots[0] * roots[1]))
        if alpha is not None and _scalar(alpha, domain) != from_roots[0]:
            raise RootsInconsistent(f"r + s = {from_roots[0]} but alpha = {alpha}", alpha=str(alpha))
        if beta is not None and _scalar(beta, domain) != from_roots[1]:
            raise RootsInconsistent(f"-rs = {from_roots[1]} but beta = {beta}", beta=str(beta))
        a, b = from_roots
    else:
        if alpha is None or beta is None:
            raise RootsInconsistent("down_up needs alpha and beta, or the roots r and s")
        a, b = _scalar(alpha, domain), _scalar(beta, domain)
    c = _scalar(gamma, domain)
    if not b:
        raise BetaZero("beta = 0: the down-up algebra is not noetherian", alpha=str(a), gamma=str(c))

    alphabet = Alphabet.from_names(["d", "u"])
    d, u = _gens(alphabet, domain)
    relations = [
        d * d * u - (d * u * d).scale(a) - (u * d * d).scale(b) - d.scale(c),
        d * u * u - (u * d * u).scale(a) - (u * u * d).scale(b) - u.scale(c),
    ]
    parameters = {"alpha": str(a), "beta": str(b), "gamma": str(c)}
    scalars = [a, b, c]
    flags = {}
    if roots:
        parameters.update(r=str(roots[0]), s=str(roots[1]))
        scalars += list(roots)
        orders = [_root_order(v) for v in roots]
        flags["roots_of_unity_order_ge_2"] = all(o is not None and o >= 2 for o in orders)
    provenance = Provenance("down_up", parameters, scalars=scalars, gk_dimension=3,
                            notes=["filtration read as deg(d) = deg(u) = 1"], flags=flags)
    return Presentation(alphabet, relations, domain, provenance)


# -- global dimension 2 ---------------------------------------------------------------

GL2_KINDS = ("quantum_plane", "jordan", "quantum_weyl", "deformed_jordan", "solvable_lie")


def gl2_family(kind: str, q=None, domain: Optional[Domain] = None) -> Presentation:
    """
    The filtered AS-regular algebras of global dimension 2 on x, y in weight 1.

    The Jordan planes use precedence y < x so that their rule xy -> yx + y^2 (+ 1) is
    order-compatible; the others use x < y.
    """
    if kind not in GL2_KINDS:
        raise ValueError(f"unknown gl2 kind {kind!r}; expected one of {', '.join(GL2_KINDS)}")
    domain = _domain_for([q], domain)
    needs_q = kind in ("quantum_plane", "quantum_weyl")
    qs = None
    if needs_q:
        if q is None:
            raise ZeroParameter(f"{kind} needs a parameter q", parameter="q")
        qs = _scalar(q, domain)
        if not qs:
            raise ZeroParameter("q must be nonzero", parameter="q")
    precedence = ["y", "x"] if "jordan" in kind else ["x", "y"]
    alphabet = Alphabet.from_names(["x", "y"], precedence=precedence)
    x, y = _gens(alphabet, domain)
    if kind == "quantum_plane":
        relation = x * y - (y * x).scale(qs)
    elif kind == "jordan":
        relation = y * x - x * y + y * y
    elif kind == "quantum_weyl":
        relation = x * y - (y * x).scale(qs) - 1
    elif kind == "deformed_jordan":
        relation = y * x - x * y + y * y + 1
    else:
        relation = y * x - x * y - x
    parameters = {"kind": kind}
    scalars = []
    if qs is not None:
        parameters["q"] = str(qs)
        scalars.append(qs)
    return Presentation(alphabet, [relation], domain,
                        Provenance("gl2", parameters, scalars=scalars, gk_dimension=2))


# -- symplectic reflection algebras ---------------------------------------------------

def symplectic_reflection_rank1(m: int, t=1, c: Optional[Union[Mapping[int, ScalarLike], Sequence]] = None,
                                domain: Optional[Domain] = None) -> Presentation:
    """
    H_{t,c} for the cyclic group of order m acting on k^2 by diag(zeta_m, zeta_m^{-1}).

    Generators x < y < g with g in weight 0. Every nontrivial group element is a
    symplectic reflection with omega_s = omega, normalized so omega(x, y) = 1.
    """
    if m < 1:
        raise ValueError(f"group order must be positive, got {m}")
    if c is None:
        c = {}
    elif not isinstance(c, Mapping):
        c = {i + 1: v for i, v in enumerate(c)}
    unknown = [i for i in c if not 1 <= int(i) <= m - 1]
    if unknown:
        raise ValueError(f"c is indexed by 1..{m - 1}, got {sorted(unknown)}")
    base = Domain.cyclotomic(m) if domain is None else domain
    domain = _domain_for([t] + list(c.values()), base)
    if domain.kind is not DomainKind.PRIME_FIELD and not domain.embeds(Domain.cyclotomic(m)):
        raise DomainMismatch(f"{domain} does not contain zeta({m})", order=m, domain=str(domain))
    zeta = root_of_unity(m, domain)
    ts = _scalar(t, domain)
    cs = {int(i): _scalar(v, domain) for i, v in c.items()}

    alphabet = Alphabet([GeneratorInfo("x", 1, 0, 0), GeneratorInfo("y", 1, 0, 1), GeneratorInfo("g", 0, 0, 2)])
    x, y, g = _gens(alphabet, domain)
    deformation = Poly.constant(ts, domain)
    for i in range(1, m):
        deformation = deformation + (g ** i).scale(cs.get(i, domain.zero()))
    relations = [
        g ** m - 1,
        g * x - (x * g).scale(zeta),
        g * y - (y * g).scale(zeta.inverse()),
        x * y - y * x - deformation,
    ]
    parameters = {"m": str(m), "t": str(ts)}
    parameters.update({f"c{i}": str(v) for i, v in sorted(cs.items())})
    provenance = Provenance(
        "symplectic_rank1", parameters, scalars=[ts, zeta] + list(cs.values()), gk_dimension=2,
        notes=["G cyclic of order m acting by diag(zeta_m, zeta_m^-1); omega(x, y) = 1",
               "relation xy - yx = t + sum c(i) g^i"])
    return Presentation(alphabet, relations, domain, provenance)


# -- constructions on presentations ----------------------------------------------------

def tensor_product(first: Presentation, second: Presentation) -> Presentation:
    """
    A_1 (x) A_2 with the product filtration: disjoint alphabets with their weights, the
    relations of both factors and b a - a b for a in A_1, b in A_2.
    """
    if first.domain != second.domain:
        raise DomainMismatch(f"factors live over {first.domain} and {second.domain}",
                             left=str(first.domain), right=str(second.domain))
    if any(first.alphabet.parities) or any(second.alphabet.parities):
        raise SuperTensorUnsupported("tensor products of superalgebras need sign conventions that are not supported")
    domain = first.domain
    taken = set(first.alphabet.names)
    renamed = []
    for name in second.alphabet.names:
        new = name
        suffix = 2
        while new in taken:
            new = f"{name}_{suffix}"
            suffix += 1
        taken.add(new)
        renamed.append(new)
    offset = len(first.alphabet)
    generators = [GeneratorInfo(g.name, g.weight, 0, first.alphabet.ranks[i])
                  for i, g in enumerate(first.alphabet)]
    generators += [GeneratorInfo(new, g.weight, 0, offset + second.alphabet.ranks[i])
                   for i, (new, g) in enumerate(zip(renamed, second.alphabet))]
    alphabet = Alphabet(generators)
    shifted = [Poly(domain, {tuple(i + offset for i in w): c for w, c in r.items()}) for r in second.relations]
    gens = _gens(alphabet, domain)
    cross = [gens[b] * gens[a] - gens[a] * gens[b]
             for a in range(offset) for b in range(offset, len(alphabet))]
    gk = None
    if first.provenance and second.provenance and None not in (first.provenance.gk_dimension,
                                                               second.provenance.gk_dimension):
        gk = first.provenance.gk_dimension + second.provenance.gk_dimension
    scalars = (first.provenance.scalars if first.provenance else []) + \
              (second.provenance.scalars if second.provenance else [])
    parameters = {"factors": " x ".join(p.provenance.family if p.provenance else "explicit" for p in (first, second))}
    if renamed != list(second.alphabet.names):
        parameters["renamed"] = ",".join(renamed)
    return Presentation(alphabet, list(first.relations) + shifted + cross, domain,
                        Provenance("tensor_product", parameters, scalars=list(scalars), gk_dimension=gk))


def associated_graded(handle: AlgebraHandle) -> Presentation:
    """
    gr A: every relation replaced by its top-weight component.

    The graded presentation is checked to have the same dimension table as A for every
    weight within the certified range.

    Raises:
        ConfluenceNotEstablished: A has not been certified.
        GradedDimensionMismatch: the dimension tables differ.
    """
    if not handle.confluent:
        raise ConfluenceNotEstablished("the associated graded algebra needs a confluent presentation",
                                       status=handle.report.status.value if handle.report else "Unchecked")
    source = handle.presentation
    alphabet = source.alphabet
    relations = [r.top_component(alphabet) for r in source.relations]
    provenance = None
    if source.provenance:
        origin = source.provenance
        family = origin.family if origin.family.startswith("gr ") else f"gr {origin.family}"
        provenance = Provenance(family, dict(origin.parameters), list(origin.scalars), origin.gk_dimension,
                                list(origin.notes), dict(origin.flags))
    graded = Presentation(alphabet, relations, source.domain, provenance)
    graded_handle = AlgebraHandle(graded, bound=handle.bound)
    top = handle.max_basis_weight()
    if not graded_handle.confluent:
        raise GradedDimensionMismatch("the top-weight relations are not confluent; the orientation is not PBW",
                                      witness=graded_handle.report.to_dict(alphabet))
    for n in range(top + 1):
        dim_a, dim_gr = handle.dim_upto(n), graded_handle.dim_upto(n)
        if dim_a != dim_gr:
            raise GradedDimensionMismatch(f"dim F_{n} is {dim_a} for A but {dim_gr} for gr A",
                                          weight=n, algebra=dim_a, graded=dim_gr)
    logger.info(f"Associated graded of {source!r} agrees in dimension up to weight {top}")
    return graded

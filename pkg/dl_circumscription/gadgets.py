"""
Generators that emit circumscribed KBs encoding other decision problems.

The tiling encodings, the succinct three-colorability ABox and the frame
consequence encoders produce ordinary CircKB values, so everything else in
the package (rendering, classification, the engines) applies to them. Most
of these KBs only have infinite or astronomically large intended models;
their certificates say so with a "structural-only" note.

Circuits are read from flat netlists::

    # x0 and y0
    g1 = AND x0 y0
    out = g1

and tiling problems from one-line descriptions::

    tiles t1 t2; H t1 t2, t2 t1; V t1 t1;
"""

from __future__ import annotations

import itertools
import logging
from collections import namedtuple
from dataclasses import dataclass
from pathlib import Path
from typing import FrozenSet, Tuple

import pyparsing as pp

from dl_circumscription.config import GadgetConfig
from dl_circumscription.exceptions import CircuitError, PreconditionError, TilingError
from dl_circumscription.metrics import role_depth
from dl_circumscription.parser import parse_string
from dl_circumscription.reductions import (ReductionCertificate,
                                           eliminate_fixed_concepts_empty_tbox, sat_to_instance)
from dl_circumscription.semantics import Interpretation, eval_concept
from dl_circumscription.syntax import (TOP, UNIVERSAL, Abox, And, CircKB, CircPattern,
                                       ConceptAssertion, ConceptName, Exists, Forall, Inclusion,
                                       Instance, Inverse, Not, Or, RoleName, Sat, concept_names,
                                       conj, disj, exists_chain, forall_chain, forall_one,
                                       forall_power, iff, implies, nominals, rename, role_names)


log = logging.getLogger(__name__)

Gadget = namedtuple('Gadget', ['kb', 'query', 'certificate'])

STRUCTURAL_ONLY = 'structural-only'


def _unused(base, taken):
    ''' base, or base followed by the first number that makes it unused '''
    name, k = base, 1
    while name in taken:
        name = '{0}{1}'.format(base, k)
        k += 1
    return name


def _signature(*concepts):
    names = set()
    for c in concepts:
        names |= concept_names(c) | role_names(c) | nominals(c)
    return names


# ***** Tiling problems *****

@dataclass(frozen=True)
class TilingProblem:
    """ Tile types with horizontal and vertical matching conditions

    Parameters:
        tiles (tuple):
            The tile type names
        horizontal (frozenset):
            Pairs (t, t') allowed side by side, t on the left
        vertical (frozenset):
            Pairs (t, t') allowed on top of each other, t below
    """
    tiles: Tuple[str, ...]
    horizontal: FrozenSet[Tuple[str, str]] = frozenset()
    vertical: FrozenSet[Tuple[str, str]] = frozenset()

    def __post_init__(self):
        if not self.tiles:
            raise TilingError('a tiling problem needs at least one tile')
        known = set(self.tiles)
        for t, u in sorted(self.horizontal | self.vertical):
            if t not in known or u not in known:
                raise TilingError('matching condition ({0}, {1}) uses an unknown tile'
                                   .format(t, u))


_identifier = pp.Word(pp.alphas + '_', pp.alphanums + '_')
_pair = pp.Group(_identifier + _identifier)
_pairs = pp.Group(pp.Optional(pp.delimited_list(_pair)))
TILING = (pp.Keyword('tiles') + pp.Group(pp.OneOrMore(_identifier)) + pp.Suppress(';')
          + pp.Keyword('H') + _pairs + pp.Suppress(';')
          + pp.Keyword('V') + _pairs + pp.Suppress(';') + pp.StringEnd())
TILING.ignore(pp.python_style_comment)


def parse_tiling(text):
    ''' Parse "tiles t1 t2; H t1 t2, t2 t1; V t1 t1;" into a TilingProblem '''
    result = parse_string(TILING, text)
    return TilingProblem(tuple(result[1]), frozenset(tuple(p) for p in result[3]),
                         frozenset(tuple(p) for p in result[5]))


def _tile(t):
    return ConceptName('A_' + t)


def _tiling_axioms(p):
    ''' The seven inclusions of the grid TBox, in order '''
    x, y = RoleName('x'), RoleName('y')
    n, b, d = ConceptName('N'), ConceptName('B'), ConceptName('D')
    tiles = sorted(p.tiles)
    unique = disj(*[conj(_tile(t), *[Not(_tile(u)) for u in tiles if u != t]) for t in tiles])
    matching = conj(
        *([implies(_tile(t), disj(*[Forall(x, _tile(u)) for u in tiles
                                    if (t, u) in p.horizontal])) for t in tiles]
          + [implies(_tile(t), disj(*[Forall(y, _tile(u)) for u in tiles
                                      if (t, u) in p.vertical])) for t in tiles]))
    return (Inclusion(TOP, And(Exists(x, TOP), Exists(y, TOP))),
            Inclusion(TOP, unique),
            Inclusion(TOP, matching),
            Inclusion(TOP, Or(n, And(Exists(x, Exists(y, b)), Exists(y, Exists(x, Not(b)))))),
            Inclusion(Not(n), d),
            Inclusion(Or(Exists(x, d), Exists(y, d)), d),
            Inclusion(d, And(Forall(x, d), Forall(y, d))))


def gen_tiling_tbox(p):
    """ A role-minimizing KB whose TBox forces a grid

    All concept and role names are minimized except B and D, which vary. The
    individual "a" is not an instance of D iff p has a solution.

    Returns:
        Gadget(kb, Instance("a", D), certificate)
    """
    tbox = _tiling_axioms(p)
    kb = CircKB(tbox)
    varying = frozenset(['B', 'D'])
    kb = kb.evolve(pattern=CircPattern(minimized=kb.predicates() - varying, varying=varying))
    query = Instance('a', ConceptName('D'))
    certificate = ReductionCertificate(
        'tiling', None, query, 'a is not an instance of D iff the tiling problem has a solution',
        (), (STRUCTURAL_ONLY, '{0} tiles'.format(len(p.tiles))))
    return Gadget(kb, query, certificate)


def gen_tiling_abox_alci(p):
    """ The grid encoding with an empty TBox, using a spy point and an inverse role

    Every inclusion C <= C' of the grid TBox becomes a : (C -> C') and
    all r0.(C -> C'); the minimized name A stands in for the nominal {a}.

    Returns:
        Gadget(kb, Instance("a", D), certificate)
    """
    r0 = RoleName('r0')
    back = Inverse('r0')
    spy, b2, n2, d = ConceptName('A'), ConceptName('B_p'), ConceptName('N_p'), ConceptName('D')
    assertions = [ConceptAssertion('a', forall_one([r0], implies(axiom.lhs, axiom.rhs)))
                  for axiom in _tiling_axioms(p)]
    assertions.append(ConceptAssertion('a', spy))
    assertions.append(ConceptAssertion('a', forall_one(
        [r0], conj(*[Forall(RoleName(s), Exists(back, spy)) for s in ('x', 'y')]))))
    marked = Or(And(spy, b2), Exists(back, And(spy, b2)))
    unmarked = disj(*[Exists(RoleName(s), Exists(back, And(spy, Not(b2)))) for s in ('x', 'y')])
    assertions.append(ConceptAssertion('a', forall_one([r0], Or(n2, And(marked, unmarked)))))
    assertions.append(ConceptAssertion('a', forall_one([r0], implies(Not(n2), d))))
    assertions.append(ConceptAssertion('a', implies(Exists(r0, d), d)))
    kb = CircKB((), Abox(tuple(assertions)))
    varying = frozenset(['D', 'B', 'B_p'])
    kb = kb.evolve(pattern=CircPattern(minimized=kb.predicates() - varying, varying=varying))
    query = Instance('a', d)
    certificate = ReductionCertificate(
        'tiling-alci', None, query,
        'a is not an instance of D iff the tiling problem has a solution', (),
        (STRUCTURAL_ONLY,))
    return Gadget(kb, query, certificate)


# ***** Circuits *****

ARITY = {'AND': 2, 'OR': 2, 'NOT': 1}


@dataclass(frozen=True)
class Gate:
    name: str
    op: str
    inputs: Tuple[str, ...]


@dataclass(frozen=True)
class Circuit:
    """ A Boolean circuit over the inputs x0..x{n-1}, y0..y{n-1}

    Gates are listed in topological order: a gate may only read inputs and
    gates listed before it.

    Raises:
        CircuitError: when the netlist is malformed
    """
    n: int
    gates: Tuple[Gate, ...]
    output: str

    def __post_init__(self):
        if self.n < 1:
            raise CircuitError('a circuit needs at least one input pair')
        known = set(self.inputs)
        for gate in self.gates:
            if gate.op not in ARITY or len(gate.inputs) != ARITY[gate.op]:
                raise CircuitError('gate {0}: bad operation {1} with {2} inputs'.format(
                    gate.name, gate.op, len(gate.inputs)))
            if gate.name in known:
                raise CircuitError('wire {0} is defined twice'.format(gate.name))
            for wire in gate.inputs:
                if wire not in known:
                    raise CircuitError('gate {0} reads {1} before it is defined'.format(
                        gate.name, wire))
            known.add(gate.name)
        if self.output not in known:
            raise CircuitError('output wire {0} is not defined'.format(self.output))

    @property
    def inputs(self):
        return (tuple('x{0}'.format(i) for i in range(self.n))
                + tuple('y{0}'.format(i) for i in range(self.n)))

    def __len__(self):
        return len(self.gates)

    def evaluate(self, bits):
        """ The output for the 2n input bits x0..x{n-1}, y0..y{n-1} """
        if len(bits) != 2 * self.n:
            raise CircuitError('expected {0} input bits, got {1}'.format(2 * self.n, len(bits)))
        values = dict(zip(self.inputs, (bool(b) for b in bits)))
        for gate in self.gates:
            args = [values[w] for w in gate.inputs]
            if gate.op == 'AND':
                values[gate.name] = args[0] and args[1]
            elif gate.op == 'OR':
                values[gate.name] = args[0] or args[1]
            else:
                values[gate.name] = not args[0]
        return values[self.output]


_wire = pp.Combine(~pp.Keyword('out') + _identifier)
_gate = pp.Group(_wire + pp.Suppress('=')
                 + (pp.Keyword('AND') + _wire + _wire | pp.Keyword('OR') + _wire + _wire
                    | pp.Keyword('NOT') + _wire))
NETLIST = (pp.Group(pp.ZeroOrMore(_gate)) + pp.Suppress(pp.Keyword('out') + '=') + _wire
           + pp.StringEnd())
NETLIST.ignore(pp.python_style_comment)


def _input_index(wire):
    if wire[:1] in ('x', 'y') and wire[1:].isdigit():
        return int(wire[1:])
    return None


def parse_circuit(text, n=None):
    """ Parse a netlist into a Circuit

    Parameters:
        text (str):
            One gate per line, "gN = AND wA wB", "gN = OR wA wB" or "gN = NOT wA",
            then "out = wire"
        n (int):
            Number of input pairs; defaults to one more than the largest input
            index used

    Raises:
        KBSyntaxError: when the text does not parse
        CircuitError: when the circuit is malformed
    """
    result = parse_string(NETLIST, text)
    gates = tuple(Gate(g[0], g[1], tuple(g[2:])) for g in result[0])
    output = result[1]
    if n is None:
        wires = [w for g in gates for w in g.inputs] + [output]
        indices = [i for i in (_input_index(w) for w in wires) if i is not None]
        n = max(indices or [0]) + 1
    return Circuit(n, gates, output)


def circuit_to_concept(circuit, out, x_names, y_names, aux_prefix=None):
    """ Translate a circuit into a Boolean concept

    Each gate g gets an auxiliary concept name A_g with A_g <-> expr_g, and
    out <-> the output wire closes the conjunction. Wherever the inputs carry
    the truth values of x_names and y_names, the concept forces out to the
    circuit's output.

    Parameters:
        circuit (Circuit):
            The circuit
        out (str):
            Output concept name
        x_names, y_names (sequence):
            Concept names for the inputs x0.. and y0..
        aux_prefix (str):
            Prefix of the auxiliary names, ``out`` by default

    Returns:
        (concept, auxiliary names)
    """
    if len(x_names) != circuit.n or len(y_names) != circuit.n:
        raise CircuitError('circuit has {0} input pairs, got {1} and {2} names'.format(
            circuit.n, len(x_names), len(y_names)))
    prefix = aux_prefix or out
    wires = dict(zip(circuit.inputs, list(x_names) + list(y_names)))
    aux = []
    parts = []
    for gate in circuit.gates:
        name = '{0}_{1}'.format(prefix, gate.name)
        args = [ConceptName(wires[w]) for w in gate.inputs]
        if gate.op == 'AND':
            expr = And(args[0], args[1])
        elif gate.op == 'OR':
            expr = Or(args[0], args[1])
        else:
            expr = Not(args[0])
        parts.append(iff(ConceptName(name), expr))
        wires[gate.name] = name
        aux.append(name)
    parts.append(iff(ConceptName(out), ConceptName(wires[circuit.output])))
    return conj(*parts), tuple(aux)


@dataclass(frozen=True)
class SuccinctGraph:
    """ A graph on 2^n nodes with edge labels, given by 4n + 3 circuits

    ``edge`` tells whether two nodes are adjacent, ``first_sign`` and
    ``second_sign`` give the polarity of the two literals labelling the edge,
    and ``labels[i][j]`` computes bit j of the i-th variable index.
    """
    n: int
    edge: Circuit
    first_sign: Circuit
    second_sign: Circuit
    labels: Tuple[Tuple[Circuit, ...], ...]

    def __post_init__(self):
        if len(self.labels) != 4 or any(len(row) != self.n for row in self.labels):
            raise CircuitError('expected 4 x {0} label circuits'.format(self.n))
        for circuit in self.circuits():
            if circuit.n != self.n:
                raise CircuitError('every circuit needs {0} inputs, one has {1}'.format(
                    2 * self.n, 2 * circuit.n))

    def circuits(self):
        yield self.edge
        yield self.first_sign
        yield self.second_sign
        for row in self.labels:
            for circuit in row:
                yield circuit

    def circuit_size(self):
        return sum(len(c) for c in self.circuits())


def load_succinct_graph(directory, n=None):
    """ Read cE.net, cS1.net, cS2.net and c<i>_<j>.net (i = 1..4, j < n) from a directory

    ``n`` defaults to the number of c1_<j>.net files.
    """
    directory = Path(directory)
    if n is None:
        n = len(list(directory.glob('c1_*.net')))

    def load(name):
        path = directory / name
        if not path.exists():
            raise CircuitError('missing circuit file {0}'.format(path))
        return parse_circuit(path.read_text(), n)

    labels = tuple(tuple(load('c{0}_{1}.net'.format(i, j)) for j in range(n))
                   for i in range(1, 5))
    return SuccinctGraph(n, load('cE.net'), load('cS1.net'), load('cS2.net'), labels)


# ***** Succinct three-colorability *****

def _bits(prefix, n):
    return ['{0}{1}'.format(prefix, j) for j in range(n)]


def _transfer(role, source, target):
    ''' bitwise: source_j here forces target_j at every role successor, likewise for not '''
    role = RoleName(role)
    return conj(*[And(implies(s, Forall(role, ConceptName(t))),
                      implies(Not(ConceptName(s)), Forall(role, Not(ConceptName(t)))))
                  for s, t in zip(source, target)])


def _zero(bits):
    return conj(*[Not(ConceptName(b)) for b in bits])


def cert3col_conjuncts(g, typeset_ranges=True):
    """ The conjuncts of the root concept, grouped by the line that produces them

    Returns:
        A list of (line number, list of concepts)
    """
    n = g.n
    r = RoleName('r')
    xs, ys = _bits('X', n), _bits('Y', n)
    ks = [_bits('K{0}_'.format(i), n) for i in range(1, 5)]
    leaves = 2 * n

    def at_leaves(c):
        return forall_chain(r, leaves, c)

    def keep(bit):
        return And(implies(bit, Forall(r, ConceptName(bit))),
                   implies(Not(ConceptName(bit)), Forall(r, Not(ConceptName(bit)))))

    def split(bit):
        return And(Exists(r, ConceptName(bit)), Exists(r, Not(ConceptName(bit))))

    if typeset_ranges:
        x_keep = [(i, j) for i in range(n) for j in range(2 * n)]
    else:
        x_keep = [(i, j) for i in range(n) for j in range(i + 1, 2 * n)]
    w = {}
    w['E'] = circuit_to_concept(g.edge, 'E', xs, ys)[0]
    w['S1'] = circuit_to_concept(g.first_sign, 'S1', xs, ys)[0]
    w['S2'] = circuit_to_concept(g.second_sign, 'S2', xs, ys)[0]
    for i in range(4):
        for j in range(n):
            w[ks[i][j]] = circuit_to_concept(g.labels[i][j], ks[i][j], xs, ys)[0]
    leaf, leaf_fix, p = ConceptName('Leaf'), ConceptName('LeafFix'), ConceptName('P')
    tr = ConceptName('Tr')
    tr1, tr2 = ConceptName('Tr1'), ConceptName('Tr2')
    s1, s2 = ConceptName('S1'), ConceptName('S2')
    elim, clash = ConceptName('Elim'), ConceptName('Clash')
    colors = [ConceptName('R'), ConceptName('G'), ConceptName('B')]
    var1, var2, col1, col2 = (RoleName(x) for x in ('var1', 'var2', 'col1', 'col2'))
    y_zero = _zero(ys)
    lines = [
        (1, [forall_chain(r, i, split(xs[i])) for i in range(n)]),
        (2, [forall_chain(r, j, keep(xs[i])) for i, j in x_keep]),
        (3, [forall_chain(r, n + i, split(ys[i])) for i in range(n)]),
        (4, [forall_chain(r, n + j, keep(ys[i])) for i in range(n) for j in range(i + 1, n)]),
        (5, [at_leaves(leaf)]),
        (6, [at_leaves(conj(w['E'], w['S1'], w['S2']))]),
        (7, [at_leaves(conj(*[w[ks[i][j]] for i in range(4)])) for j in range(n)]),
        (8, [at_leaves(conj(Exists(var1, leaf_fix), _transfer('var1', xs, ks[0]),
                            _transfer('var1', ys, ks[1])))]),
        (9, [at_leaves(conj(Exists(var2, leaf_fix), _transfer('var2', xs, ks[2]),
                            _transfer('var2', ys, ks[3])))]),
        (10, [implies(exists_chain(r, leaves, Exists(var1, Not(leaf))), p)]),
        (11, [implies(exists_chain(r, leaves, Exists(var2, Not(leaf))), p)]),
        (12, [at_leaves(implies(s1, iff(tr1, Forall(var1, tr))))]),
        (13, [at_leaves(implies(Not(s1), iff(Not(tr1), Forall(var1, tr))))]),
        (14, [at_leaves(implies(s2, iff(tr2, Forall(var2, tr))))]),
        # the symmetric reading: var2, as in line 14
        (15, [at_leaves(implies(Not(s2), iff(Not(tr2), Forall(var2, tr))))]),
        (16, [at_leaves(iff(elim, Or(Not(ConceptName('E')), Not(Or(tr1, tr2)))))]),
        (17, [at_leaves(And(Exists(col1, leaf_fix), Exists(col2, leaf_fix)))]),
        (18, [at_leaves(And(_transfer('col1', xs, xs), Forall(col1, y_zero)))]),
        # the second endpoint is stored at the leaf whose X equals this leaf's Y
        (19, [at_leaves(And(_transfer('col2', ys, xs), Forall(col2, y_zero)))]),
        (20, [implies(exists_chain(r, leaves, Exists(col1, Not(leaf))), p)]),
        (21, [implies(exists_chain(r, leaves, Exists(col2, Not(leaf))), p)]),
        (22, [at_leaves(implies(y_zero, disj(*colors)))]),
        (23, [at_leaves(implies(y_zero, conj(*[Not(And(a, b)) for a, b
                                               in itertools.combinations(colors, 2)])))]),
    ]
    for number, color in zip((24, 25, 26), colors):
        lines.append((number, [at_leaves(implies(
            conj(Not(elim), Exists(col1, color), Exists(col2, color)), clash))]))
    return lines


def gen_cert3col(g, cap=None, eliminate_fixed=False, typeset_ranges=True):
    """ The ABox whose query is satisfiable iff the succinct graph is a yes-instance
    of the non-3-colorability-under-some-assignment problem

    Parameters:
        g (SuccinctGraph):
            The input graph
        cap (int):
            Largest n accepted; GadgetConfig().cert3col_cap by default
        eliminate_fixed (bool):
            Turn the query into an instance query at a fresh individual and
            remove the fixed names
        typeset_ranges (bool):
            Use j < 2n for the X-propagation conjuncts instead of i < j < 2n

    Returns:
        Gadget(kb, Sat query or Instance query, certificate)

    Raises:
        PreconditionError: when n exceeds the cap
    """
    cap = GadgetConfig().cert3col_cap if cap is None else cap
    if g.n > cap:
        raise PreconditionError('n = {0} exceeds the cap of {1}'.format(g.n, cap))
    c0 = conj(*[c for _, group in cert3col_conjuncts(g, typeset_ranges) for c in group])
    root = ConceptName('Root')
    abox = Abox((ConceptAssertion('a0', And(c0, root)),))
    fixed = frozenset(['LeafFix', 'Tr'] + _bits('X', g.n) + _bits('Y', g.n))
    minimized = frozenset(['Root', 'Leaf', 'Clash'])
    kb = CircKB((), abox)
    kb = kb.evolve(pattern=CircPattern(minimized=minimized, fixed=fixed,
                                       varying=kb.predicates() - minimized - fixed))
    query = Sat(conj(root, Not(ConceptName('P')),
                     exists_chain('r', 2 * g.n, ConceptName('Clash'))))
    log.debug('cert3col: n=%d, %d circuit gates', g.n, g.circuit_size())
    notes = (STRUCTURAL_ONLY, 'total circuit size {0}'.format(g.circuit_size()))
    if eliminate_fixed:
        kb, query, _ = sat_to_instance(query.concept, kb)
        kb, query, _ = eliminate_fixed_concepts_empty_tbox(kb, query)
        notes += ('fixed names eliminated',)
    certificate = ReductionCertificate(
        'cert3col', None, query, 'the query holds iff the graph is a yes-instance', (), notes)
    return Gadget(kb, query, certificate)


# ***** Frame consequence *****

def _separate(c, d):
    ''' Rename the concept names of d that also occur in c '''
    shared = concept_names(c) & concept_names(d)
    taken = _signature(c, d)
    mapping = {}
    for name in sorted(shared):
        mapping[name] = _unused(name + '_d', taken)
        taken.add(mapping[name])
    return rename(d, mapping)


def gen_frame_consequence_univ(c, d):
    """ Encode "d is a semantic consequence of c" with the universal role

    The role names of c and d are fixed, A and the names of c are minimized and
    the names of d vary; d's names are renamed apart from c's first.

    Returns:
        Gadget(kb, Instance("a", not all univ.c or d), certificate)
    """
    d = _separate(c, d)
    taken = _signature(c, d)
    a = _unused('A', taken)
    minimized = [a] + sorted(concept_names(c))
    assertion = Or(Not(Forall(UNIVERSAL, c)), Forall(UNIVERSAL, conj(*minimized)))
    kb = CircKB((), Abox((ConceptAssertion('a', assertion),)),
                CircPattern(minimized=frozenset(minimized),
                            fixed=role_names(c) | role_names(d),
                            varying=concept_names(d)))
    query = Instance('a', Or(Not(Forall(UNIVERSAL, c)), d))
    certificate = ReductionCertificate(
        'mso-univ', None, query, 'the instance holds iff d is a semantic consequence of c')
    return Gadget(kb, query, certificate)


def gen_frame_consequence_alc(c, d, role='r'):
    """ Encode "d is a semantic consequence of c" without the universal role

    The universal role is approximated by a transitive role s containing
    ``role``, reached through a tower of depth 1 + max(2, depth of c).

    Raises:
        PreconditionError: when c or d use a role other than ``role``
    """
    for concept in (c, d):
        extra = role_names(concept) - {role}
        if extra:
            raise PreconditionError('only the role {0} may occur, found {1}'.format(
                role, sorted(extra)[0]))
    d = _separate(c, d)
    taken = _signature(c, d) | {role}
    a = ConceptName(_unused('A', taken))
    s = _unused('s', taken | {a.name})
    roles = [role, s]
    trans = Or(Not(Forall(RoleName(s), a)), Forall(RoleName(s), Forall(RoleName(s), a)))
    cont = Or(Not(Forall(RoleName(s), a)), Forall(RoleName(role), a))
    guarded = Not(forall_one(roles, conj(trans, cont, c)))
    minimized = [a.name] + sorted(concept_names(c))
    m = 1 + max(2, role_depth(c))
    assertion = Or(guarded, forall_power(roles, m, conj(*minimized)))
    kb = CircKB((), Abox((ConceptAssertion('a', assertion),)),
                CircPattern(minimized=frozenset(minimized), fixed=frozenset(roles),
                            varying=concept_names(d)))
    query = Instance('a', Or(guarded, d))
    certificate = ReductionCertificate(
        'mso-alc', None, query,
        'the instance holds iff d follows from c on transitive frames containing the role',
        (), ('tower depth {0}'.format(m),))
    return Gadget(kb, query, certificate)


def _subsets(items):
    items = list(items)
    for k in range(len(items) + 1):
        for combo in itertools.combinations(items, k):
            yield frozenset(combo)


def frame_valid(frame, concept):
    """ True if the concept holds everywhere under every valuation of its concept names

    Parameters:
        frame (Interpretation):
            The frame; only its domain and role extensions are used
        concept (Concept):
            A concept without nominals
    """
    names = sorted(concept_names(concept))
    domain = frozenset(frame.domain)
    choices = [list(_subsets(frame.domain)) for _ in names]
    for extensions in itertools.product(*choices):
        i = Interpretation.build(frame.size, dict(zip(names, extensions)), frame.roles, {})
        if eval_concept(i, concept) != domain:
            return False
    return True


def frames(size, roles):
    ''' Every frame over size elements for the given role names '''
    roles = sorted(roles)
    pairs = [(e, f) for e in range(size) for f in range(size)]
    for extensions in itertools.product(*[list(_subsets(pairs)) for _ in roles]):
        yield Interpretation.build(size, {}, dict(zip(roles, extensions)), {})


def find_counter_frame(c, d, max_size=3, roles=None):
    """ The first frame, by size, on which c is valid and d is not

    Parameters:
        c, d (Concept):
            ALC concepts
        max_size (int):
            Largest frame size tried
        roles (iterable):
            Role names of the frames; those of c and d by default

    Returns:
        An Interpretation without concept extensions, or None
    """
    roles = sorted(set(roles or ()) | role_names(c) | role_names(d))
    for size in range(1, max_size + 1):
        for frame in frames(size, roles):
            if frame_valid(frame, c) and not frame_valid(frame, d):
                return frame
    return None

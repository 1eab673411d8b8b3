import itertools

import numpy as np
import pytest

from dl_circumscription.config import SearchConfig
from dl_circumscription.engine import HoldsUpTo, circ_instance, classical_model_search
from dl_circumscription.exceptions import (CircuitError, KBSyntaxError, PreconditionError,
                                           TilingError)
from dl_circumscription.gadgets import (STRUCTURAL_ONLY, Circuit, Gate, SuccinctGraph,
                                        TilingProblem, cert3col_conjuncts, circuit_to_concept,
                                        find_counter_frame, frame_valid, frames, gen_cert3col,
                                        gen_frame_consequence_alc, gen_frame_consequence_univ,
                                        gen_tiling_abox_alci, gen_tiling_tbox,
                                        load_succinct_graph, parse_circuit, parse_tiling)
from dl_circumscription.metrics import ProblemKind, classify_problem, size_of
from dl_circumscription.parser import parse_concept
from dl_circumscription.semantics import Interpretation
from dl_circumscription.syntax import (Abox, CircKB, ConceptAssertion, ConceptName, Instance,
                                       Not, Sat, conj)

from .corpus import seeded


# ***** Tiling *****

def test_parse_tiling():
    p = parse_tiling('tiles t1 t2; H t1 t2, t2 t1; V t1 t1;')
    assert p == TilingProblem(('t1', 't2'), frozenset([('t1', 't2'), ('t2', 't1')]),
                              frozenset([('t1', 't1')]))
    assert parse_tiling('tiles t; H; V;').horizontal == frozenset()

    with pytest.raises(KBSyntaxError):
        parse_tiling('tiles t1; H t1;')
    with pytest.raises(TilingError):
        parse_tiling('tiles t1; H t1 t2; V;')
    with pytest.raises(TilingError):
        TilingProblem(())


def test_tiling_gadgets():
    p = parse_tiling('tiles t1 t2; H t1 t2, t2 t1; V t1 t1, t2 t2;')
    gadget = gen_tiling_tbox(p)
    assert len(gadget.kb.tbox) == 7
    assert gadget.query == Instance('a', ConceptName('D'))
    assert gadget.kb.pattern.varying == {'B', 'D'}
    assert {'x', 'y', 'N', 'A_t1', 'A_t2'} <= gadget.kb.pattern.minimized
    assert classify_problem(gadget.kb).kind == ProblemKind.ROLE_MINIMIZING_WITH_TBOX
    assert gadget.certificate.notes == (STRUCTURAL_ONLY, '2 tiles')

    gadget = gen_tiling_abox_alci(p)
    assert gadget.kb.tbox == ()
    assert gadget.kb.individuals() == {'a'}
    assert classify_problem(gadget.kb).kind == \
        ProblemKind.ROLE_MINIMIZING_EMPTY_TBOX_WITH_INVERSE
    assert 'r0' in gadget.kb.pattern.minimized
    assert {'D', 'B', 'B_p'} <= gadget.kb.pattern.varying


# ***** Circuits *****

def test_parse_circuit():
    c = parse_circuit('''
        # xor of x0 and y0
        g1 = OR x0 y0
        g2 = AND x0 y0
        g3 = NOT g2
        g4 = AND g1 g3
        out = g4
    ''')
    assert c.n == 1
    assert len(c) == 4
    assert c.gates[0] == Gate('g1', 'OR', ('x0', 'y0'))
    assert [c.evaluate(bits) for bits in ((0, 0), (0, 1), (1, 0), (1, 1))] == \
        [False, True, True, False]

    assert parse_circuit('out = y2').n == 3
    assert parse_circuit('out = x0', 2).inputs == ('x0', 'x1', 'y0', 'y1')


def test_circuit_errors():
    with pytest.raises(CircuitError):
        parse_circuit('g1 = AND x0 g2\ng2 = NOT x0\nout = g1')
    with pytest.raises(CircuitError):
        parse_circuit('out = g9')
    with pytest.raises(CircuitError):
        parse_circuit('x0 = NOT y0\nout = x0')
    with pytest.raises(CircuitError):
        Circuit(0, (), 'x0')
    with pytest.raises(CircuitError):
        Circuit(1, (Gate('g', 'XOR', ('x0', 'y0')),), 'g')
    with pytest.raises(CircuitError):
        parse_circuit('out = x0').evaluate([1])
    with pytest.raises(KBSyntaxError):
        parse_circuit('g1 = AND x0\nout = g1')


def concept_output(circuit, bits, value):
    ''' Whether the translated circuit admits the output value under the input bits '''
    xs = ['X{0}'.format(i) for i in range(circuit.n)]
    ys = ['Y{0}'.format(i) for i in range(circuit.n)]
    concept, aux = circuit_to_concept(circuit, 'Out', xs, ys)
    assert len(aux) == len(circuit)
    literals = [ConceptName(name) if bit else Not(ConceptName(name))
                for name, bit in zip(xs + ys, bits)]
    out = ConceptName('Out') if value else Not(ConceptName('Out'))
    abox = Abox((ConceptAssertion('a', conj(concept, out, *literals)),))
    return classical_model_search((), abox, [], 1) is not None


def small_circuits():
    inputs = ('x0', 'y0')
    yield Circuit(1, (), 'x0')
    for op in ('AND', 'OR'):
        for a, b in itertools.product(inputs, repeat=2):
            yield Circuit(1, (Gate('g', op, (a, b)),), 'g')
    for a in inputs:
        yield Circuit(1, (Gate('g', 'NOT', (a,)),), 'g')


def random_circuit(rng, n=2, size=6):
    wires = ['x{0}'.format(i) for i in range(n)] + ['y{0}'.format(i) for i in range(n)]
    gates = []
    for k in range(rng.randint(1, size)):
        op = rng.choice(('AND', 'OR', 'NOT'))
        args = tuple(rng.choice(wires) for _ in range(1 if op == 'NOT' else 2))
        gates.append(Gate('g{0}'.format(k), op, args))
        wires.append(gates[-1].name)
    return Circuit(n, tuple(gates), wires[-1])


def test_circuit_to_concept():
    rng = seeded(17)
    circuits = list(small_circuits()) + [random_circuit(rng) for _ in range(12)]
    for circuit in circuits:
        for bits in itertools.product((0, 1), repeat=2 * circuit.n):
            expected = circuit.evaluate(bits)
            assert concept_output(circuit, bits, expected)
            assert not concept_output(circuit, bits, not expected)

    with pytest.raises(CircuitError):
        circuit_to_concept(Circuit(1, (), 'x0'), 'Out', ['X0', 'X1'], ['Y0'])


# ***** Succinct three-colorability *****

def trivial_graph(n, padding=0):
    ''' Every circuit is a chain of padding NOT gates over x0 '''
    text = ''.join('g{0} = NOT {1}\n'.format(k, 'g{0}'.format(k - 1) if k else 'x0')
                   for k in range(padding))
    text += 'out = {0}\n'.format('g{0}'.format(padding - 1) if padding else 'x0')

    def circuit():
        return parse_circuit(text, n)

    return SuccinctGraph(n, circuit(), circuit(), circuit(),
                         tuple(tuple(circuit() for _ in range(n)) for _ in range(4)))


def test_succinct_graph():
    g = trivial_graph(1, 2)
    assert g.circuit_size() == 7 * 2
    assert len(list(g.circuits())) == 7

    with pytest.raises(CircuitError):
        SuccinctGraph(1, g.edge, g.edge, g.edge, g.labels[:3])
    with pytest.raises(CircuitError):
        other = parse_circuit('out = x0', 2)
        SuccinctGraph(1, other, g.edge, g.edge, g.labels)


def test_cert3col_conjuncts():
    g = trivial_graph(1)
    lines = cert3col_conjuncts(g)
    assert [number for number, _ in lines] == list(range(1, 27))
    counts = dict((number, len(group)) for number, group in lines)
    assert [counts[k] for k in (1, 2, 3, 4)] == [1, 2, 1, 0]
    assert len(dict(cert3col_conjuncts(g, typeset_ranges=False))[2]) == 1

    g = trivial_graph(2)
    counts = dict((number, len(group)) for number, group in cert3col_conjuncts(g))
    assert [counts[k] for k in (1, 2, 3, 4, 7)] == [2, 8, 2, 1, 2]


def test_cert3col():
    gadget = gen_cert3col(trivial_graph(1))
    kb = gadget.kb
    assert kb.pattern.minimized == {'Root', 'Leaf', 'Clash'}
    assert kb.pattern.fixed == {'LeafFix', 'Tr', 'X0', 'Y0'}
    assert kb.individuals() == {'a0'}
    assert isinstance(gadget.query, Sat)
    assert STRUCTURAL_ONLY in gadget.certificate.notes

    with pytest.raises(PreconditionError):
        gen_cert3col(trivial_graph(3))
    assert gen_cert3col(trivial_graph(3), cap=3).kb.individuals() == {'a0'}

    gadget = gen_cert3col(trivial_graph(1), eliminate_fixed=True)
    assert gadget.kb.pattern.fixed == frozenset()
    assert isinstance(gadget.query, Instance)
    assert gadget.query.individual == '@g/a'
    assert 'fixed names eliminated' in gadget.certificate.notes


def test_cert3col_size_is_linear():
    paddings = list(range(0, 21, 4))
    sizes = [size_of(gen_cert3col(trivial_graph(1, k)).kb.abox) for k in paddings]
    slope, intercept = np.polyfit(paddings, sizes, 1)
    fitted = np.polyval([slope, intercept], paddings)
    residual = np.sum((np.array(sizes) - fitted) ** 2)
    total = np.sum((np.array(sizes) - np.mean(sizes)) ** 2)
    assert slope > 0
    assert 1 - residual / total > 0.99


def test_load_succinct_graph(tmp_path):
    names = ['cE.net', 'cS1.net', 'cS2.net'] + ['c{0}_0.net'.format(i) for i in range(1, 5)]
    for name in names:
        (tmp_path / name).write_text('g1 = NOT x0\nout = g1\n')
    g = load_succinct_graph(tmp_path)
    assert g.n == 1
    assert g.circuit_size() == 7
    assert g.edge.evaluate([0, 1])

    (tmp_path / 'cS2.net').unlink()
    with pytest.raises(CircuitError):
        load_succinct_graph(tmp_path)


# ***** Frame consequence *****

MODAL = {
    'T': 'not all r p or p',
    'D': 'some r top',
    'B': 'not p or all r some r p',
    '4': 'not all r p or all r all r p',
    'Func': 'not some r p or all r p',
    'Empty': 'all r bot',
    'P': 'p',
    'S4': '(not all r p or p) and (not all r p or all r all r p)',
}


def modal(key):
    return parse_concept(MODAL[key])


def test_frames():
    assert len(list(frames(2, ['r']))) == 16
    assert len(list(frames(1, []))) == 1

    loop = Interpretation.build(1, {}, {'r': {(0, 0)}})
    assert frame_valid(loop, modal('T'))
    assert frame_valid(loop, modal('D'))
    assert not frame_valid(loop, modal('P'))
    assert not frame_valid(loop, modal('Empty'))

    # reflexive but not symmetric
    step = Interpretation.build(2, {}, {'r': {(0, 0), (1, 1), (0, 1)}})
    assert frame_valid(step, modal('T'))
    assert not frame_valid(step, modal('B'))


def test_counter_frames():
    frame = find_counter_frame(modal('Empty'), modal('T'), 2)
    assert frame.size == 1 and frame.roles == {}

    frame = find_counter_frame(modal('D'), modal('T'), 2)
    assert frame.size == 2
    assert find_counter_frame(modal('T'), modal('T'), 2) is None
    assert find_counter_frame(modal('P'), modal('Empty'), 2) is None
    assert find_counter_frame(modal('T'), modal('4'), 2) is None


def test_frame_consequence_univ():
    gadget = gen_frame_consequence_univ(modal('T'), modal('T'))
    assert gadget.kb.pattern.minimized == {'A', 'p'}
    assert gadget.kb.pattern.fixed == {'r'}
    assert gadget.kb.pattern.varying == {'p_d'}
    assert gadget.query.individual == 'a'
    assert classify_problem(gadget.kb).kind == ProblemKind.ROLE_FIXING

    cfg = SearchConfig(max_domain=2)
    assert circ_instance('a', gadget.query.concept, gadget.kb, cfg) == HoldsUpTo(2)

    gadget = gen_frame_consequence_univ(modal('D'), modal('T'))
    verdict = circ_instance('a', gadget.query.concept, gadget.kb, cfg)
    assert verdict.tag == 'countermodel' and verdict.domain_size == 2


@pytest.mark.slow
def test_frame_consequence_agrees_with_frames():
    cfg = SearchConfig(max_domain=2)
    counters = 0
    for c_key, d_key in itertools.product(MODAL, repeat=2):
        c, d = modal(c_key), modal(d_key)
        frame = find_counter_frame(c, d, 2)
        gadget = gen_frame_consequence_univ(c, d)
        verdict = circ_instance(gadget.query.individual, gadget.query.concept, gadget.kb, cfg)
        assert (frame is not None) == (verdict.tag == 'countermodel'), (c_key, d_key)
        if frame is not None:
            assert verdict.domain_size == frame.size
            counters += 1
    assert counters >= 15


def test_frame_consequence_alc():
    gadget = gen_frame_consequence_alc(modal('T'), modal('4'))
    kb = gadget.kb
    assert kb.pattern.fixed == {'r', 's'}
    assert kb.pattern.minimized == {'A', 'p'}
    assert kb.pattern.varying == {'p_d'}
    assert gadget.certificate.notes == ('tower depth 3',)
    assert classify_problem(kb).kind == ProblemKind.ROLE_FIXING

    deep = parse_concept('all r all r all r p')
    assert gen_frame_consequence_alc(deep, modal('P')).certificate.notes == ('tower depth 4',)

    with pytest.raises(PreconditionError):
        gen_frame_consequence_alc(parse_concept('some q p'), modal('P'))

    # names already in use are avoided
    gadget = gen_frame_consequence_alc(parse_concept('A or some r s'), modal('P'))
    assert {'A1', 'A', 's'} <= gadget.kb.pattern.minimized
    assert gadget.kb.pattern.fixed == {'r', 's1'}
    assert isinstance(gadget.kb, CircKB)

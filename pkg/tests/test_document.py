import json
from fractions import Fraction
import pytest
from afakit.core import ValidationError, accept_value
from afakit.combinators import amplify, constant
from afakit.document import DocumentError, parse, serialize, read, write

EQ_DOC = """{
  "format": "afa-v1",
  "kind": "affine",
  "alphabet": ["a", "b"],
  "states": 3,
  "initial": ["1", "0", "0"],
  "accepting": [0],
  "transitions": {
    "a": [["1", "0", "0"], ["1", "1", "0"], ["-1", "0", "1"]],
    "b": [["1", "0", "0"], ["-1", "1", "0"], ["1", "0", "1"]]
  }
}"""


def edit(**fields):
    doc = json.loads(EQ_DOC)
    for key, value in fields.items():
        if value is None:
            del doc[key]
        else:
            doc[key] = value
    return json.dumps(doc)


def test_parse(eq):
    assert parse(EQ_DOC) == eq
    assert accept_value(parse(EQ_DOC), 'aab') == Fraction(1, 3)


def test_serialize_roundtrip(eq):
    text = serialize(eq)
    assert parse(text) == eq
    assert '      ["1", "0", "0"],' in text.splitlines()
    big = amplify(eq, method='symmetric')
    assert parse(serialize(big)) == big
    assert parse(serialize(constant('2/7'))).kind == 'stochastic'


def test_number_formats():
    doc = edit(initial=['0.25', '3/4', 0],
               transitions={'a': [['1/2', '0', 0], ['0.5', 1, 0], [0, 0, 1]],
                            'b': [[1, 0, 0], [0, 1, 0], [0, 0, 1]]})
    afa = parse(doc)
    assert afa.initial.entries == (Fraction(1, 4), Fraction(3, 4), 0)
    assert afa.matrix('a')[1][0] == Fraction(1, 2)


def test_kind_default():
    assert parse(edit(kind=None)).kind == 'affine'


@pytest.mark.parametrize('fields, field', [
    ({'format': 'afa-v2'}, 'format'),
    ({'kind': 'quantum'}, 'kind'),
    ({'states': 0}, 'states'),
    ({'states': True}, 'states'),
    ({'alphabet': ['ab']}, 'alphabet'),
    ({'initial': ['1', '0']}, 'initial'),
    ({'initial': ['1', 'x', '0']}, 'initial[1]'),
    ({'initial': ['1', 0.0, '0']}, 'initial[1]'),
    ({'accepting': [3]}, 'accepting'),
    ({'accepting': [0, 0]}, 'accepting'),
    ({'transitions': []}, 'transitions'),
    ({'transitions': {'a': [['1', '0', '0']]}}, 'transitions.a'),
    ({'transitions': {'a': [['1', '0', '0'], ['0', '1'], ['0', '0', '1']]}}, 'transitions.a[1]'),
    ({'transitions': {'a': [['1', '0', '0'], ['0', '1', '1/0'], ['0', '0', '1']]}}, 'transitions.a[1][2]'),
    ({'accepting': None}, 'accepting'),
    ({'extra': 1}, 'extra'),
])
def test_document_errors(fields, field):
    with pytest.raises(DocumentError) as e:
        parse(edit(**fields))
    assert e.value.field == field
    assert f"field '{field}'" in str(e.value)


def test_syntax_error():
    with pytest.raises(DocumentError) as e:
        parse('{\n  "format": "afa-v1"\n  "states": 3\n}')
    assert e.value.line == 3
    assert e.value.column == 3
    assert str(e.value).startswith("line 3, column 3: Expecting ',' delimiter")
    with pytest.raises(DocumentError, match='JSON object'):
        parse('[1, 2]')


def test_validation_error():
    doc = edit(transitions={'a': [['1', '0', '0'], ['1', '1/2', '0'], ['-1', '0', '1']],
                            'b': [['1', '0', '0'], ['0', '1', '0'], ['0', '0', '1']]})
    with pytest.raises(ValidationError) as e:
        parse(doc)
    assert e.value.violations == ["matrix 'a' column 1 sums to 1/2"]
    assert 'invalid automaton' in str(e.value)
    with pytest.raises(ValidationError, match="no transition matrix for symbol 'b'"):
        parse(edit(transitions={'a': [['1', '0', '0'], ['0', '1', '0'], ['0', '0', '1']]}))


def test_read_write(eq, tmp_path):
    target = str(tmp_path / 'eq.json')
    write(eq, target)
    assert read(target) == eq
    with pytest.raises(RuntimeError, match='exists'):
        write(eq, target)
    write(constant(1), target, overwrite=True)
    assert read(target) == constant(1)

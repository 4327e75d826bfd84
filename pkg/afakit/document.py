"""
The `afa-v1` automaton file format.

A document is a JSON object::

    {
      "format": "afa-v1",
      "comment": "...",
      "kind": "affine",
      "alphabet": ["a", "b"],
      "states": 3,
      "initial": ["1", "0", "0"],
      "accepting": [0],
      "transitions": {
        "a": [
          ["1", "0", "0"],
          ["1", "1", "0"],
          ["-1", "0", "1"]
        ],
        ...
      }
    }

Numbers are strings holding an integer, a ratio `p/q` or a finite decimal;
JSON integers are accepted as well. Matrices are stored row by row and
entry [i][j] is the weight flowing from state j into state i.
"""
import os
import json
import logging
from afakit.core import Afa, AffineMatrix, AffineVector, Projection, KINDS, to_rational, validate, \
    ValidationError
from afakit.ancillary import format_rational

log = logging.getLogger('afakit')

FORMAT = 'afa-v1'

COMMENT = ('matrices are row-major; entry [i][j] is the weight flowing from state j '
           'into state i, so every column sums up to 1')

REQUIRED = ['format', 'alphabet', 'states', 'initial', 'accepting', 'transitions']
OPTIONAL = ['kind', 'comment']


class DocumentError(ValueError):
    """
    Raised for malformed automaton documents.

    Parameters
    ----------
    message: str
        the error description
    field: str or None
        the path of the offending field, e.g. `transitions.a[0][2]`
    line: int or None
        the line of a JSON syntax error
    column: int or None
        the column of a JSON syntax error
    """

    def __init__(self, message, field=None, line=None, column=None):
        self.field = field
        self.line = line
        self.column = column
        if line is not None:
            location = f'line {line}, column {column}: '
        elif field is not None:
            location = f"field '{field}': "
        else:
            location = ''
        super(DocumentError, self).__init__(location + message)


def _number(value, field):
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise DocumentError(f'expected a number string, got {json.dumps(value)}', field=field)
    try:
        return to_rational(value)
    except ValueError as e:
        raise DocumentError(str(e), field=field)


def _number_list(value, length, field):
    if not isinstance(value, list):
        raise DocumentError('expected a list', field=field)
    if len(value) != length:
        raise DocumentError(f'expected {length} entries, got {len(value)}', field=field)
    return [_number(x, f'{field}[{i}]') for i, x in enumerate(value)]


def parse(text):
    """
    Parse an automaton document.

    Parameters
    ----------
    text: str
        the JSON document

    Returns
    -------
    afakit.core.Afa

    Raises
    ------
    DocumentError
        if the document is malformed
    afakit.core.ValidationError
        if the described automaton is invalid
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError(e.msg, line=e.lineno, column=e.colno)
    if not isinstance(doc, dict):
        raise DocumentError('the document must be a JSON object')

    for key in REQUIRED:
        if key not in doc:
            raise DocumentError('missing field', field=key)
    unknown = [key for key in doc if key not in REQUIRED + OPTIONAL]
    if len(unknown) > 0:
        raise DocumentError('unknown field', field=unknown[0])
    if doc['format'] != FORMAT:
        raise DocumentError(f"expected '{FORMAT}', got {json.dumps(doc['format'])}", field='format')
    kind = doc.get('kind', 'affine')
    if kind not in KINDS:
        raise DocumentError(f'expected one of {list(KINDS)}, got {json.dumps(kind)}', field='kind')

    alphabet = doc['alphabet']
    if not isinstance(alphabet, list) or \
            not all(isinstance(x, str) and len(x) == 1 for x in alphabet):
        raise DocumentError('expected a list of single-character strings', field='alphabet')

    k = doc['states']
    if isinstance(k, bool) or not isinstance(k, int) or k < 1:
        raise DocumentError(f'expected a positive integer, got {json.dumps(k)}', field='states')

    initial = _number_list(doc['initial'], k, 'initial')

    accepting = doc['accepting']
    if not isinstance(accepting, list) or \
            not all(isinstance(x, int) and not isinstance(x, bool) for x in accepting):
        raise DocumentError('expected a list of integers', field='accepting')
    try:
        projection = Projection(k, accepting)
    except ValueError as e:
        raise DocumentError(str(e), field='accepting')

    transitions = doc['transitions']
    if not isinstance(transitions, dict):
        raise DocumentError('expected an object mapping symbols to matrices', field='transitions')
    matrices = {}
    for symbol, grid in transitions.items():
        field = f'transitions.{symbol}'
        if not isinstance(grid, list) or len(grid) != k:
            raise DocumentError(f'expected {k} rows', field=field)
        rows = [_number_list(row, k, f'{field}[{i}]') for i, row in enumerate(grid)]
        matrices[symbol] = AffineMatrix(rows)

    afa = Afa(alphabet=alphabet,
              initial=AffineVector(initial),
              transitions=matrices,
              accepting=projection,
              kind=kind,
              check=False)
    violations = validate(afa)
    if len(violations) > 0:
        raise ValidationError(violations)
    return afa


def serialize(afa):
    """
    Serialize an automaton to an `afa-v1` document.
    Numbers are written in lowest terms, one matrix row per line.

    Parameters
    ----------
    afa: afakit.core.Afa

    Returns
    -------
    str
    """
    def numbers(values):
        return '[' + ', '.join(json.dumps(format_rational(x)) for x in values) + ']'

    lines = ['{',
             f'  "format": {json.dumps(FORMAT)},',
             f'  "comment": {json.dumps(COMMENT)},',
             f'  "kind": {json.dumps(afa.kind)},',
             f'  "alphabet": {json.dumps(list(afa.alphabet))},',
             f'  "states": {afa.state_count},',
             f'  "initial": {numbers(afa.initial)},',
             f'  "accepting": {json.dumps(list(afa.accepting))},',
             '  "transitions": {']
    for i, symbol in enumerate(afa.alphabet):
        rows = [f'      {numbers(row)}' for row in afa.matrix(symbol).rows]
        lines.append(f'    {json.dumps(symbol)}: [')
        lines.append(',\n'.join(rows))
        lines.append('    ]' + (',' if i < len(afa.alphabet) - 1 else ''))
    lines += ['  }', '}']
    return '\n'.join(lines) + '\n'


def read(filename):
    """
    Read an automaton from an `afa-v1` file.

    Parameters
    ----------
    filename: str
        the name of the file

    Returns
    -------
    afakit.core.Afa
    """
    log.debug(f'reading automaton {filename}')
    with open(filename, 'r') as f:
        return parse(f.read())


def write(afa, filename, overwrite=False):
    """
    Write an automaton to an `afa-v1` file.

    Parameters
    ----------
    afa: afakit.core.Afa
    filename: str
        the name of the file to write
    overwrite: bool
        overwrite an existing file?

    Raises
    ------
    RuntimeError
        if the file exists and `overwrite` is False
    """
    if os.path.isfile(filename) and not overwrite:
        raise RuntimeError(f"target file '{filename}' already exists")
    log.debug(f'writing automaton with {afa.state_count} states to {filename}')
    with open(filename, 'w') as f:
        f.write(serialize(afa))

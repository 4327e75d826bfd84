import logging
import functools
from fractions import Fraction
import importlib.resources
import click
from afakit.core import ValidationError, to_rational
from afakit.document import DocumentError

log = logging.getLogger('afakit')

BINARY = ['tensor', 'convex', 'union', 'intersect']
UNARY = ['complement', 'amplify', 'scale', 'shift']


class RationalParamType(click.ParamType):
    """
    Command line numbers as exact rationals: `2`, `1/3` or `0.25`.
    """
    name = 'P/Q'

    def convert(self, value, param, ctx):
        try:
            return to_rational(value)
        except (TypeError, ValueError) as e:
            self.fail(str(e), param, ctx)


RATIONAL = RationalParamType()


def report_errors(func):
    """
    Map library exceptions to messages on standard error and exit codes:
    1 for invalid automata, 2 for malformed input, file and argument errors.
    """
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        ctx = click.get_current_context()
        try:
            return func(*args, **kwargs)
        except (click.exceptions.Exit, click.exceptions.Abort):
            raise
        except ValidationError as e:
            click.echo(f'Error: {e}', err=True)
            ctx.exit(1)
        except (DocumentError, OSError, ValueError, KeyError, RuntimeError, AssertionError) as e:
            click.echo(f'Error: {e}', err=True)
            ctx.exit(2)
    return wrapper


@click.group(name='afa',
             no_args_is_help=True,
             invoke_without_command=True)
@click.option('--version', is_flag=True,
              help='Print afakit version information and exit. Overrides all other arguments.')
@click.option('--config-file', '-c', required=False, type=click.Path(exists=True, dir_okay=False),
              help="Full path to an INI-style configuration text file. "
                   "If not defined, the package's default file will be used.")
@click.option('--debug', is_flag=True,
              help='Log debugging information.')
@click.pass_context
def cli(ctx, version, config_file, debug):
    if version:
        import afakit
        click.echo(getattr(afakit, '__version__', 'unknown'))
        ctx.exit()
    from afakit.config import get_config
    from afakit.ancillary import set_logging
    try:
        config = get_config(config_file=config_file)
        set_logging(config=config, debug=debug)
    except (ValueError, AssertionError, OSError) as e:
        click.echo(f'Error: invalid configuration: {e}', err=True)
        ctx.exit(2)
    ctx.obj = {'config': config}


@cli.command(name='init',
             no_args_is_help=True,
             context_settings=dict(
                 ignore_unknown_options=True,
                 allow_extra_args=True, )
             )
@click.option('--config-file', '-c', required=True, type=click.Path(),
              help="Full path to an INI-style target configuration text file.")
@click.option('--overwrite', '-o', is_flag=True, default=False,
              help='Overwrite an existing file?')
@click.option('--config-source', '-s', required=False, type=click.Path(),
              help="Full path to an INI-style source configuration text file. "
                   "If not defined, configuration will be read from the package's default file.")
@click.pass_context
@report_errors
def init(ctx, config_file, overwrite=False, config_source=None):
    """
    Initialize an afakit configuration file.

    The package's default file or a user-defined source file may serve as base.
    Additional options can be passed to override individual parameters,
    for example:

    afa init -c config.ini --max_states 50000 --amplify_method tensor
    """
    from afakit.config import get_config, write
    if len(ctx.args) % 2 != 0:
        raise click.UsageError(f'every override needs a value: {" ".join(ctx.args)}', ctx=ctx)
    extra = {ctx.args[i][2:]: ctx.args[i + 1] for i in range(0, len(ctx.args), 2)}
    if config_source is None:
        with importlib.resources.path(package='afakit.resources',
                                      resource='config.ini') as path:
            config_source = str(path)
    config = get_config(config_file=config_source, **extra)
    write(config=config, target=config_file, overwrite=overwrite)
    log.info(f'configuration written to {config_file}')


@cli.command(name='validate')
@click.argument('file', type=click.Path(exists=True, dir_okay=False))
@report_errors
def validate(file):
    """
    Check an automaton file; violations are listed on standard error.
    """
    from afakit.document import read
    afa = read(file)
    click.echo(f'valid {afa.kind} automaton: {afa.state_count} states, '
               f'alphabet {"".join(afa.alphabet)}')


@cli.command(name='eval')
@click.argument('file', type=click.Path(exists=True, dir_okay=False))
@click.option('--word', '-w', default='', help='The input word (default: the empty word).')
@report_errors
def evaluate(file, word):
    """
    Print the exact accepting value of a word and its decimal approximation.
    """
    from afakit.document import read
    from afakit.core import accept_value
    from afakit.ancillary import format_rational
    value = accept_value(read(file), word)
    click.echo(f'{format_rational(value)} ({float(value):.6f})')


@cli.command(name='member')
@click.argument('file', type=click.Path(exists=True, dir_okay=False))
@click.option('--word', '-w', default='', help='The input word (default: the empty word).')
@click.option('--cutpoint', required=True, type=RATIONAL, help='The cutpoint λ.')
@click.pass_context
@report_errors
def member(ctx, file, word, cutpoint):
    """
    Decide whether the value of a word exceeds the cutpoint.
    Prints 'true' (exit code 0) or 'false' (exit code 1).
    """
    from afakit.document import read
    from afakit.core import member as is_member
    accepted = is_member(read(file), word, cutpoint)
    click.echo('true' if accepted else 'false')
    if not accepted:
        ctx.exit(1)


@cli.command(name='compose')
@click.argument('operation', type=click.Choice(BINARY + UNARY))
@click.argument('files', nargs=-1, required=True, type=click.Path(exists=True, dir_okay=False))
@click.option('--alpha', type=RATIONAL,
              help='The weight of the first automaton (convex) or the scale factor (scale).')
@click.option('--rounds', type=click.IntRange(min=0), default=1, show_default=True,
              help='The number of amplification rounds.')
@click.option('--method', type=click.Choice(['tensor', 'symmetric']),
              help='The amplification method. Default: configuration parameter amplify_method.')
@click.option('--from', 'lambda1', type=RATIONAL, help='The current cutpoint (shift).')
@click.option('--to', 'lambda2', type=RATIONAL, help='The new cutpoint (shift).')
@click.option('--output', '-o', required=True, type=click.Path(dir_okay=False),
              help='The automaton file to write.')
@click.pass_context
@report_errors
def compose(ctx, operation, files, alpha, rounds, method, lambda1, lambda2, output):
    """
    Build a new automaton from one or two automaton files.

    \b
    binary operations (two files):
    - tensor:     value f * g
    - convex:     value α f + (1 - α) g (--alpha)
    - union:      value (f + g) / 2
    - intersect:  value f * g
    unary operations (one file):
    - complement: value 1 - f
    - amplify:    value f²(3 - 2f) per round (--rounds, --method)
    - scale:      value α f (--alpha)
    - shift:      cutpoint λ1 becomes λ2 (--from, --to)
    """
    from afakit import combinators
    from afakit.document import read, write
    expected = 2 if operation in BINARY else 1
    if len(files) != expected:
        raise click.UsageError(f"operation '{operation}' expects {expected} file(s), got {len(files)}")
    automata = [read(f) for f in files]
    config = ctx.obj['config']['combinators']

    if operation in ['convex', 'scale'] and alpha is None:
        raise click.UsageError(f"operation '{operation}' requires --alpha")
    if operation == 'shift' and (lambda1 is None or lambda2 is None):
        raise click.UsageError("operation 'shift' requires --from and --to")

    if operation == 'tensor':
        out = combinators.tensor_product(*automata)
    elif operation == 'convex':
        out = combinators.convex_sum(*automata, combinators.MixWeights(alpha))
    elif operation == 'union':
        out = combinators.union_aut(*automata)
    elif operation == 'intersect':
        out = combinators.intersect_aut(*automata)
    elif operation == 'complement':
        out = combinators.complement(automata[0])
    elif operation == 'amplify':
        method = config['amplify_method'] if method is None else method
        out = combinators.amplify_rounds(automata[0], rounds, method=method,
                                         max_states=config['max_states'])
    elif operation == 'scale':
        out = combinators.scale(automata[0], alpha)
    else:
        out = combinators.shift_cutpoint(automata[0], lambda1, lambda2)
    write(out, output, overwrite=True)
    log.info(f'{operation}: {out.state_count} states written to {output}')


@cli.command(name='normalize')
@click.argument('form', type=click.Choice(['canonical', 'bounded', 'full']))
@click.argument('file', type=click.Path(exists=True, dir_okay=False))
@click.option('--cutpoint', type=RATIONAL,
              help="The cutpoint of the input language; required for 'full', default 1/2 for 'canonical'.")
@click.option('--output', '-o', required=True, type=click.Path(dir_okay=False),
              help='The automaton file to write.')
@report_errors
def normalize(form, file, cutpoint, output):
    """
    Convert an automaton to a normal form.

    \b
    - canonical: initial state (1, 0, ..., 0); the empty word is accepted if its
                 value exceeds --cutpoint (default 1/2)
    - bounded:   state entries within [-1, 1]; requires the canonical initial state
    - full:      cutpoint shifted to 1/2, canonical initial state and bounded entries
    """
    from afakit import normal_forms
    from afakit.document import read, write
    afa = read(file)
    if form == 'canonical':
        out = normal_forms.canonical_initial(afa, cutpoint=Fraction(1, 2) if cutpoint is None else cutpoint)
    elif form == 'bounded':
        out = normal_forms.bounded_form(afa)
    else:
        if cutpoint is None:
            raise click.UsageError("form 'full' requires --cutpoint")
        out = normal_forms.normalize_pipeline(afa, cutpoint)
    write(out, output, overwrite=True)
    log.info(f'{form} form: {out.state_count} states written to {output}')


@cli.command(name='gallery')
@click.argument('name', type=click.Choice(['constant', 'eq', 'eq3', 'dfa-parity']))
@click.option('--alpha', type=RATIONAL, default='1/2', show_default=True,
              help="The value of 'constant'.")
@click.option('--gain', type=RATIONAL,
              help="The counter gain of 'eq' (default 1) and 'eq3' (default 2).")
@click.option('--output', '-o', required=True, type=click.Path(dir_okay=False),
              help='The automaton file to write.')
@report_errors
def gallery(name, alpha, gain, output):
    """
    Write a ready-made automaton to a file.

    \b
    - constant:   value α on every word over {a, b}
    - eq:         words over {a, b} with as many a's as b's
    - eq3:        words over {a, b, c} with as many a's as b's and c's
    - dfa-parity: words over {a, b} with an even number of a's
    """
    from afakit import gallery as builders
    from afakit.document import write
    if name == 'constant':
        out = builders.constant_pfa(alpha)
    elif name == 'eq':
        out = builders.eq_afa(gain=1 if gain is None else gain)
    elif name == 'eq3':
        out = builders.eq3_afa(gain=2 if gain is None else gain)
    else:
        out = builders.dfa_parity()
    write(out, output, overwrite=True)
    log.info(f'{name}: {out.state_count} states written to {output}')


@cli.group(name='analyze', no_args_is_help=True)
def analyze():
    """
    Numerical diagnostics of unary languages and automata.
    """
    pass


def _parse_coeffs(ctx, param, value):
    if value is None:
        return None
    try:
        return [int(x) for x in value.split(',')]
    except ValueError:
        raise click.BadParameter('expected a comma-separated list of integers')


@analyze.command(name='density')
@click.option('--lang', type=click.Choice(['prime', 'poly']), required=True,
              help='The unary language.')
@click.option('--coeffs', callback=_parse_coeffs,
              help="The coefficients of 'poly' in increasing degree order, e.g. 1,0,0,2.")
@click.option('--max', 'max_n', type=click.IntRange(min=0), required=True,
              help='The largest word length N.')
@report_errors
def density(lang, coeffs, max_n):
    """
    Running member ratio |{k <= n : aᵏ ∈ L}| / (n + 1) of a unary language.
    """
    from afakit import analysis
    if lang == 'prime':
        table = analysis.prime_language(max_n)
    else:
        if coeffs is None:
            raise click.UsageError("language 'poly' requires --coeffs")
        table = analysis.poly_language(coeffs, max_n)
    minimum, ratio = analysis.lower_density(table, max_n)
    members = int(table.sum())
    click.echo(f'members {members}')
    click.echo(f'ratio {ratio:.6f} ({members}/{max_n + 1})')
    click.echo(f'minimum {minimum:.6f}')


def _unary(afa, symbol):
    from afakit.combinators import restrict_alphabet
    if symbol is not None:
        return restrict_alphabet(afa, [symbol])
    return afa


def _emit_scan(scan, csv):
    if csv is not None:
        scan.to_csv(csv)
        log.info(f'{len(scan)} values written to {csv}')
    else:
        for line in scan.lines():
            click.echo(line)


@analyze.command(name='scan')
@click.argument('file', type=click.Path(exists=True, dir_okay=False))
@click.option('--max-n', type=click.IntRange(min=0), required=True,
              help='The largest word length.')
@click.option('--exact', is_flag=True, help='Compute exact rational values.')
@click.option('--symbol', help='Restrict a larger alphabet to this symbol.')
@click.option('--csv', type=click.Path(dir_okay=False), help='Write the values to a CSV file.')
@click.pass_context
@report_errors
def scan(ctx, file, max_n, exact, symbol, csv):
    """
    The values F(n) = f(aⁿ) of a unary automaton for n = 0, ..., max-n.
    """
    from afakit import analysis
    from afakit.document import read
    budget = ctx.obj['config']['analysis']['exact_step_budget']
    afa = _unary(read(file), symbol)
    _emit_scan(analysis.unary_scan(afa, max_n, exact=exact, step_budget=budget), csv)


@analyze.command(name='progression')
@click.argument('file', type=click.Path(exists=True, dir_okay=False))
@click.option('--h', 'h', type=click.IntRange(min=0), default=0, show_default=True,
              help='The offset h.')
@click.option('--q', 'q', type=click.IntRange(min=1), default=1, show_default=True,
              help='The step Q.')
@click.option('--count', type=click.IntRange(min=1), required=True,
              help='The number of values.')
@click.option('--exact', is_flag=True, help='Compute exact rational values.')
@click.option('--symbol', help='Restrict a larger alphabet to this symbol.')
@click.option('--csv', type=click.Path(dir_okay=False), help='Write the values to a CSV file.')
@click.pass_context
@report_errors
def progression(ctx, file, h, q, count, exact, symbol, csv):
    """
    The values F(h + iQ) of a unary automaton for i = 0, ..., count - 1.
    """
    from afakit import analysis
    from afakit.document import read
    budget = ctx.obj['config']['analysis']['exact_step_budget']
    afa = _unary(read(file), symbol)
    spec = analysis.ProgressionSpec(h=h, q=q, count=count)
    _emit_scan(analysis.progression_scan(afa, spec, exact=exact, step_budget=budget), csv)


@analyze.command(name='spectrum')
@click.argument('file', type=click.Path(exists=True, dir_okay=False))
@click.option('--symbol', help='The symbol whose matrix is analyzed (default: the first symbol).')
@click.pass_context
@report_errors
def spectrum(ctx, file, symbol):
    """
    Eigenvalues of a transition matrix: modulus, angle θ ∈ [0, 1) and θ as a fraction
    if it is rational within the configured tolerance.
    """
    from afakit import analysis
    from afakit.document import read
    config = ctx.obj['config']['analysis']
    afa = read(file)
    symbol = afa.alphabet[0] if symbol is None else symbol
    eigenvalues = analysis.spectrum(afa.matrix(symbol))
    for item in eigenvalues:
        fraction = analysis.rational_angle_detect(item['angle'],
                                                  max_denominator=config['angle_max_denominator'],
                                                  tol=config['angle_tolerance'])
        fraction = '-' if fraction is None else f'{fraction[0]}/{fraction[1]}'
        click.echo(f"{item['modulus']:.9f} {item['angle']:.9f} {fraction}")
    if not analysis.has_unit_eigenvalue(eigenvalues, config['spectrum_tolerance']):
        log.warning('no eigenvalue 1 found within the tolerance')


@analyze.command(name='gap')
@click.argument('file', type=click.Path(exists=True, dir_okay=False))
@click.option('--cutpoint', required=True, type=RATIONAL, help='The cutpoint λ.')
@click.option('--max-len', type=click.IntRange(min=0), required=True,
              help='Sample all words up to this length.')
@report_errors
def gap(file, cutpoint, max_len):
    """
    Isolation of the values of all words up to a length from a cutpoint.
    """
    from afakit import analysis
    from afakit.document import read
    from afakit.ancillary import format_rational
    report = analysis.isolation_gap(read(file), cutpoint, max_len=max_len)
    for key in ['min_accepted', 'max_rejected', 'gap']:
        value = report[key]
        click.echo(f"{key} {'-' if value is None else format_rational(value)}")
    click.echo(f"accepted {report['accepted']}")
    click.echo(f"rejected {report['rejected']}")
    if report['one_sided']:
        log.warning('the sample contains only accepted or only rejected words')

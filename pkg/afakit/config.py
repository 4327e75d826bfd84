import os
import copy
import importlib.resources
import configparser

SECTIONS = ['combinators', 'analysis', 'output']

DEFAULTS = {'combinators': {'max_states': '1000000',
                            'amplify_method': 'tensor'},
            'analysis': {'exact_step_budget': '2000',
                         'spectrum_tolerance': '1e-9',
                         'angle_max_denominator': '100',
                         'angle_tolerance': '1e-9'},
            'output': {'logfile': 'None'}}


def get_keys(section):
    """
    get all allowed configuration keys

    Parameters
    ----------
    section: {'combinators', 'analysis', 'output'}
        the configuration section to get the allowed keys for.

    Returns
    -------
    list[str]
        a list of keys
    """
    if section == 'combinators':
        return ['max_states', 'amplify_method']
    elif section == 'analysis':
        return ['exact_step_budget', 'spectrum_tolerance', 'angle_max_denominator', 'angle_tolerance']
    elif section == 'output':
        return ['logfile']
    else:
        raise RuntimeError(f"unknown section: {section}. Options: {SECTIONS}.")


def get_config(config_file=None, **kwargs):
    """
    Returns the content of a `config.ini` file as a dictionary.

    Parameters
    ----------
    config_file: str or None
        Full path to the config file that should be parsed to a dictionary.
        If None, the default configuration shipped with the package is used.
    kwargs
        further keyword arguments overriding configuration found in the config file.
        Values are strings as passed on the command line.

    Returns
    -------
    dict
        Dictionary of the parsed config parameters.
        The keys correspond to the config sections in lowercase letters.
    """
    parser = configparser.ConfigParser(allow_no_value=True,
                                       converters={'_positive': _parse_positive,
                                                   '_amplify_method': _parse_amplify_method})
    if isinstance(config_file, str):
        if not os.path.isfile(config_file):
            raise FileNotFoundError("Config file {} does not exist.".format(config_file))
        parser.read(config_file)
    elif config_file is None:
        with importlib.resources.path('afakit.resources', 'config.ini') as path:
            config_file = str(path)
        parser.read(config_file)
    else:
        raise TypeError(f"'config_file' must be of type str or None, was {type(config_file)}")

    allowed = [key for section in SECTIONS for key in get_keys(section)]
    for k in kwargs.keys():
        if k not in allowed:
            raise ValueError("Parameter '{}' is not allowed; should be one of {}".format(k, allowed))

    out_dict = {}
    for section in SECTIONS:
        name = section.upper()
        if name not in parser.keys():
            parser.add_section(name)
        sec = parser[name]
        allowed_keys = get_keys(section)

        # override config file parameters with additional keyword arguments
        for k, v in kwargs.items():
            if k in allowed_keys:
                sec[k] = str(v).strip()

        # set defaults
        for k, v in DEFAULTS[section].items():
            if k not in sec.keys():
                sec[k] = v

        out_dict[section] = {}
        for k, v in sec.items():
            v = _keyval_check(key=k, val=v, allowed_keys=allowed_keys)
            if k in ['max_states', 'exact_step_budget', 'angle_max_denominator']:
                v = sec.get_positive(k)
            if k in ['spectrum_tolerance', 'angle_tolerance']:
                v = sec.getfloat(k)
                msg = f"Parameter '{k}': expected a positive number; got {v} instead"
                assert v > 0, msg
            if k == 'amplify_method':
                v = sec.get_amplify_method(k)
            if k == 'logfile' and v is not None:
                v = os.path.abspath(v)
            out_dict[section][k] = v
    return out_dict


def _parse_positive(s):
    """Custom converter for configparser:
    https://docs.python.org/3/library/configparser.html#customizing-parser-behaviour"""
    try:
        value = int(s)
    except ValueError:
        raise ValueError(f"Error while parsing '{s}' to an integer")
    if value < 1:
        raise ValueError(f"expected a positive integer; got {value} instead")
    return value


def _parse_amplify_method(s):
    """Custom converter for configparser:
    https://docs.python.org/3/library/configparser.html#customizing-parser-behaviour"""
    allowed = ['tensor', 'symmetric']
    if s not in allowed:
        msg = "Parameter 'amplify_method': expected to be one of {}; got '{}' instead"
        raise ValueError(msg.format(allowed, s))
    return s


def _keyval_check(key, val, allowed_keys):
    """Helper function to check and clean up key,value pairs while parsing a config file."""
    if key not in allowed_keys:
        raise ValueError("Parameter '{}' is not allowed; should be one of {}".format(key, allowed_keys))

    val = val.replace('"', '').replace("'", "")
    if val in ['None', 'none', '']:
        val = None

    return val


def write(config, target, overwrite=False, **kwargs):
    """
    Write configuration options to a config file.

    Parameters
    ----------
    config: dict
        the configuration as returned by :func:`get_config`
    target: str
        the name of the output file
    overwrite: bool
        overwrite existing file if it exists?
    kwargs
        further keyword arguments overriding configuration found in the config file.
    """
    if os.path.isfile(target) and not overwrite:
        raise RuntimeError("target already exists")

    config = copy.deepcopy(config)
    for k, v in kwargs.items():
        for section in SECTIONS:
            if k in get_keys(section):
                config[section][k] = v
                break
        else:
            raise KeyError("Parameter '{}' is not supported".format(k))
    parser = configparser.ConfigParser()
    for section in SECTIONS:
        parser[section.upper()] = {k: str(v) for k, v in config[section].items()}
    with open(target, 'w') as configfile:
        parser.write(configfile)

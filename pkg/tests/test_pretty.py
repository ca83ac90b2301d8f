import io

from click import unstyle

from quantum.cvkit.cli.pretty import (
    PrintStatus,
    format_error,
    print_done,
    print_error,
    print_pretty,
)
from quantum.cvkit.exceptions import ParameterError


def test_pretty_output():
    buf = io.StringIO()
    print_pretty('doing something...', status=PrintStatus.WAITING, file=buf)
    print_done('done!', file=buf)
    text = unstyle(buf.getvalue())
    assert 'doing something...' in text
    assert '✔' in text
    assert text.endswith('\n')


def test_format_error_of_toolkit_error():
    text = ''.join(format_error(ParameterError('η must lie in (0, 1)', 1.5)))
    assert text.startswith('ParameterError: ')
    assert '1.5' in text
    assert 'Traceback' not in text


def test_format_error_includes_traceback_for_bugs():
    try:
        {}['missing']
    except KeyError as e:
        text = ''.join(format_error(e))
    assert text.startswith('KeyError: ')
    assert '*** Traceback ***' in text


def test_print_error():
    buf = io.StringIO()
    print_error(ParameterError('bad'), file=buf)
    assert 'ParameterError' in unstyle(buf.getvalue())

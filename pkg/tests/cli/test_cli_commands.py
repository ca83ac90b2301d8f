import json
import math
import re

import pytest
from click.testing import CliRunner

from quantum.cvkit.cli.main import dispatch, main
from quantum.cvkit.cli.types import RunConfig

HOM = '[[0.7071067811865476, 0.7071067811865476], [0.7071067811865476, -0.7071067811865476]]'


@pytest.fixture(scope="module")
def runner():
    return CliRunner()


def _invoke(runner, tmp_path, args, name='out.json'):
    out = tmp_path / name
    result = runner.invoke(main, ['--out', str(out), *args])
    assert result.exit_code == 0, result.output
    return json.loads(out.read_text())


@pytest.mark.parametrize('help_arg', ['-h', '--help'])
def test_print_help(runner, help_arg):
    result = runner.invoke(main, [help_arg])
    assert result.exit_code == 0
    assert re.match(r'Usage: ([.\w-]+) \[OPTIONS\] COMMAND \[ARGS\]', result.output)


def test_print_help_for_unknown_command(runner):
    result = runner.invoke(main, ['x-non-existent-command'])
    assert result.exit_code == 2
    assert re.match(r'Usage: ([.\w-]+) \[OPTIONS\] COMMAND \[ARGS\]', result.output)


def test_bs_prob_hong_ou_mandel(runner, tmp_path):
    doc = _invoke(runner, tmp_path, ['bs-prob', '-u', HOM, '-i', '1,1', '-o', '1,1'])
    assert doc['verb'] == 'bs-prob'
    assert doc['seed'] is None
    assert len(doc['inputs_digest']) == 64
    assert doc['result'] == pytest.approx(0.0, abs=1e-12)


def test_bs_prob_lists_sector(runner, tmp_path):
    doc = _invoke(runner, tmp_path, ['bs-prob', '-u', HOM, '-i', '1,1'])
    probs = {tuple(row['outcome']): row['probability'] for row in doc['result']}
    assert probs[(2, 0)] == pytest.approx(0.5)
    assert probs[(1, 1)] == pytest.approx(0.0, abs=1e-12)
    assert probs[(0, 2)] == pytest.approx(0.5)


def test_inputs_digest_is_stable(runner, tmp_path):
    args = ['bs-prob', '-u', HOM, '-i', '1,1', '-o', '2,0']
    first = _invoke(runner, tmp_path, args, 'a.json')
    second = _invoke(runner, tmp_path, args, 'b.json')
    assert first['inputs_digest'] == second['inputs_digest']


def test_sampling_requires_seed(runner):
    result = runner.invoke(main, ['bs-sample', '-u', HOM, '-i', '1,1', '-n', '5'])
    assert result.exit_code == 2
    assert '--seed' in result.output


def test_sampling_is_reproducible(runner, tmp_path):
    args = ['--seed', '5', 'bs-sample', '-u', HOM, '-i', '1,1', '-n', '20']
    first = _invoke(runner, tmp_path, args, 'a.json')
    second = _invoke(runner, tmp_path, args, 'b.json')
    assert first['seed'] == 5
    assert first['result'] == second['result']
    assert len(first['result']) == 20
    assert all(row['mode0'] + row['mode1'] == 2 for row in first['result'])


def test_computation_error_exits_with_one(runner, tmp_path):
    out = tmp_path / 'err.json'
    result = runner.invoke(main, ['--out', str(out), 'bs-prob', '-u', '[[1, 1], [0, 1]]', '-i', '1,0'])
    assert result.exit_code == 1
    doc = json.loads(out.read_text())
    assert doc['error'] == 'NotUnitaryError'


def test_dispatch(tmp_path):
    out = tmp_path / 'dispatch.json'
    run = RunConfig('bs-prob', ['-u', HOM, '-i', '1,1', '-o', '2,0'], out=str(out))
    assert run.to_argv()[:2] == ['--format', 'json']
    assert dispatch(run) == 0
    assert json.loads(out.read_text())['result'] == pytest.approx(0.5)
    assert dispatch(RunConfig('x-non-existent-command')) == 2
    bad = RunConfig('bs-prob', ['-u', '[[1, 1], [0, 1]]', '-i', '1,0'], out=str(tmp_path / 'bad.json'))
    assert dispatch(bad) == 1


def test_tolerance_override(runner, tmp_path):
    skewed = '[[1.0, 0.0], [0.0, 1.001]]'
    args = ['bs-prob', '-u', skewed, '-i', '1,0']
    result = runner.invoke(main, ['--out', str(tmp_path / 'a.json'), *args])
    assert result.exit_code == 1
    doc = _invoke(runner, tmp_path, ['--tol.unitarity', '0.01', *args], 'b.json')
    assert len(doc['result']) == 2


def test_heterodyne_csv_pipeline(runner, tmp_path):
    samples = tmp_path / 'samples.csv'
    result = runner.invoke(main, [
        '--format', 'csv', '--seed', '3', '--out', str(samples),
        'het-sample', '-c', '[0, 1]', '-n', '200',
    ])
    assert result.exit_code == 0, result.output
    lines = samples.read_text().splitlines()
    assert lines[0] == 'mode0_re,mode0_im'
    assert len(lines) == 201
    sidecar = json.loads((tmp_path / 'samples.csv.json').read_text())
    assert sidecar['seed'] == 3
    assert sidecar['count'] == 200
    doc = _invoke(runner, tmp_path, [
        'tomo', '-s', str(samples), '-E', '1', '--eps', '0.5', '--eps-prime', '0.5',
    ], 'tomo.json')
    assert [(row['k'], row['l']) for row in doc['result']] == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert all(row['bound'] == pytest.approx(1.0) for row in doc['result'])


def test_heterodyne_json_pipeline(runner, tmp_path):
    _invoke(runner, tmp_path, ['--seed', '4', 'het-sample', '-c', '[1]', '-n', '500'], 'samples.json')
    doc = _invoke(runner, tmp_path, [
        'certify', '-s', str(tmp_path / 'samples.json'), '-t', '[1]', '-E', '1', '--eps', '0.4',
        '--support', '500',
    ], 'certify.json')
    result = doc['result']
    assert 0.0 <= result['fidelity'] <= 1.0
    assert result['support_passed'] is True
    assert result['rank'] is None


def test_console_output(runner):
    result = runner.invoke(main, ['--format', 'console', 'tomo-count', '-E', '1', '--eps', '0.5',
                                  '--eps-prime', '0.5'])
    assert result.exit_code == 0
    assert 'Samples' in result.output


def test_wcf_probs_requires_reflectivities(runner):
    result = runner.invoke(main, ['wcf-probs', '-z', '0.5'])
    assert result.exit_code == 2


def test_wcf_probs_lossless(runner, tmp_path):
    x = 0.2928932188134524
    doc = _invoke(runner, tmp_path, [
        'wcf-probs', '-x', repr(x), '-y', repr(x), '-z', repr(2 * x),
    ])
    result = doc['result']
    assert result['p_honest_a'] == pytest.approx(0.5)
    assert result['p_cheat_b'] == pytest.approx(1 / 2 ** 0.5)
    assert result['l_star'] == 1


def test_reproduce_hadamard(runner, tmp_path):
    doc = _invoke(runner, tmp_path, ['reproduce', 'hadamard-m4'])
    assert doc['seed'] == 0
    assert all(row['passed'] for row in doc['result'])


def test_cvs_origin_pairing(runner, tmp_path):
    pairing = '[[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]'
    doc = _invoke(runner, tmp_path, [
        'cvs-origin', '-m', '4', '-n', '2', '--xi', '0', '--zeta', '0.5',
        '--phi', repr(math.pi / 4), '--sigma', pairing,
    ])
    assert doc['verb'] == 'cvs-origin'
    base = 1 + math.cosh(1.0)
    assert doc['result'] == pytest.approx(4 * math.sinh(1.0) ** 2 / (math.pi ** 4 * base ** 4))


def test_embed_sigma(runner, tmp_path):
    doc = _invoke(runner, tmp_path, ['embed-sigma', '-x', '[[0.5]]', '-m', '4', '--nu', '1'])
    sigma = doc['result']['sigma']
    assert len(sigma) == 4
    assert sigma[0][1] == pytest.approx(0.5)
    assert sigma[1][0] == pytest.approx(0.5)


def test_stellar_eval_core(runner, tmp_path):
    doc = _invoke(runner, tmp_path, ['stellar-eval', '-c', '[0, 1]', '-z', '2', '-z', '1j'])
    values = [row['value'] for row in doc['result']]
    assert values[0] == pytest.approx([2.0, 0.0])
    assert values[1] == pytest.approx([0.0, 1.0])


def test_stellar_eval_needs_one_state(runner, tmp_path):
    out = tmp_path / 'err.json'
    result = runner.invoke(main, ['--out', str(out), 'stellar-eval', '-z', '0'])
    assert result.exit_code == 1
    assert json.loads(out.read_text())['error'] == 'ParameterError'


def test_core_extract_of_constant(runner, tmp_path):
    doc = _invoke(runner, tmp_path, ['core-extract', '-P', '[1]'])
    coefficients = doc['result']['coefficients']
    assert len(coefficients) == 1
    assert math.hypot(*coefficients[0]) == pytest.approx(1.0)


def test_wigner_point_of_vacuum(runner, tmp_path):
    _invoke(runner, tmp_path, ['--seed', '6', 'het-sample', '-c', '[1]', '-n', '2000'], 'samples.json')
    doc = _invoke(runner, tmp_path, [
        'wigner-point', '-s', str(tmp_path / 'samples.json'), '--alpha', '0', '--eta', '0.2', '-E', '2',
    ], 'wigner.json')
    assert doc['verb'] == 'wigner-point'
    result = doc['result']
    assert abs(result['value'] - 2 / math.pi) <= result['bound']


@pytest.mark.parametrize('fidelity,rank', [(0.9, 1), (0.97, 2), (0.7, 0)])
def test_rank_witness(runner, tmp_path, fidelity, rank):
    doc = _invoke(runner, tmp_path, [
        'rank-witness', '-F', str(fidelity), '--bound', '0.05', '-R', '0.5,0.3',
    ])
    assert doc['result']['rank'] == rank


def test_rank_witness_rejects_increasing_profile(runner, tmp_path):
    out = tmp_path / 'err.json'
    result = runner.invoke(main, ['--out', str(out), 'rank-witness', '-F', '0.9', '--bound', '0',
                                  '-R', '0.3,0.5'])
    assert result.exit_code == 1
    assert json.loads(out.read_text())['error'] == 'ParameterError'


def test_swap_stats(runner, tmp_path):
    doc = _invoke(runner, tmp_path, ['swap-stats', '-m', '3', '-x', '0.5'])
    assert doc['result']['accept'] == pytest.approx(2 / 3)
    assert doc['result']['reject'] == pytest.approx(1 / 3)


def test_hadamard_accept_swap_outcomes(runner, tmp_path):
    doc = _invoke(runner, tmp_path, ['hadamard-accept', '--order', '1'])
    rows = {tuple(row['outcome']): row for row in doc['result']}
    assert rows[(1, 1)]['pr_i'] == pytest.approx(0.0, abs=1e-12)
    assert rows[(1, 1)]['pr_d'] == pytest.approx(0.5)
    assert rows[(2, 0)]['accepted'] is True
    assert rows[(1, 1)]['accepted'] is False


def test_coherent_scheme(runner, tmp_path):
    doc = _invoke(runner, tmp_path, ['coherent-scheme', '-m', '4', '-x', '0.5'])
    result = doc['result']
    assert result['no_click'] == pytest.approx(0.5 ** 0.75)
    assert result['single_photon_gap'] == pytest.approx(0.25)
    assert result['coherent_gap'] == pytest.approx(27 / 256)


def test_wcf_point_matches_scan(runner, tmp_path):
    args = ['-z', '0.57', '--eta-d', '0.95']
    point = _invoke(runner, tmp_path, ['wcf-point', *args, '-d', '0'], 'point.json')
    scan = _invoke(runner, tmp_path, ['wcf-scan', *args, '--distances', '0'], 'scan.json')
    assert point['verb'] == 'wcf-point'
    result = point['result']
    assert result['p_cheat_quantum'] == pytest.approx(scan['result'][0]['p_cheat_quantum'])
    assert result['x'] == pytest.approx(0.405, abs=0.01)
    assert result['y'] == pytest.approx(0.188, abs=0.01)

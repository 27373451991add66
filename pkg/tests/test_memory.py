import json
from pathlib import Path

import numpy as np
import pytest

from utils.memory import RunLog, json_default


def test_run_id_format():
    log = RunLog(command='profile')
    assert log.run_id.startswith('run_')
    assert len(log.run_id) == len('run_20260101_120000')
    assert RunLog(run_id='run_fixed').run_id == 'run_fixed'


def test_history_is_trimmed():
    log = RunLog(max_history_length=3)
    for i in range(5):
        log.add_message('system', f'step {i}', metadata={'i': i})
    assert [m['content'] for m in log.history] == ['step 2', 'step 3', 'step 4']
    assert log.history[-1]['metadata'] == {'i': 4}


def test_results_artifacts_and_counters():
    log = RunLog(command='spectrum')
    log.store_result('k_op', {'n_negative': 1})
    log.add_artifact(Path('output') / 'spectrum_K_op.csv')
    log.increment('profiles_sampled')
    log.increment('profiles_sampled', 2)
    assert log.run_data['results']['k_op'] == {'n_negative': 1}
    stats = log.get_run_stats()
    assert stats['artifact_count'] == 1
    assert stats['counters'] == {'artifacts_written': 1, 'profiles_sampled': 3}
    assert stats['command'] == 'spectrum'


def test_save_to_file(tmp_path):
    log = RunLog(command='stability')
    log.add_message('user', 'stability --L pi')
    log.store_result('slopes', np.array([-1.0, -2.0]))
    path = log.save_to_file(tmp_path / 'runs')
    assert path.name == f'{log.run_id}.json'
    raw = json.loads(path.read_text())
    assert raw['run_data']['results']['slopes'] == [-1.0, -2.0]

    assert raw['run_data']['run_id'] == log.run_id
    assert raw['history'][0]['content'] == 'stability --L pi'
    assert raw['run_data']['command'] == 'stability'


def test_json_default():
    assert json_default(np.float64(0.5)) == 0.5
    assert json_default(np.array([[1, 2]])) == [[1, 2]]
    assert json_default(Path('a') / 'b') == str(Path('a') / 'b')
    with pytest.raises(TypeError):
        json_default(object())

"""
Run History Module

Keeps the record of one CLI invocation: the steps it went through, the
results it stored and the artifacts it wrote. The record is saved as
``run_<id>.json`` next to the artifacts so every output directory explains
how it was produced.
"""

import json
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np


def json_default(value: Any) -> Any:
    """json.dump fallback for numpy scalars and arrays."""
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"not JSON serializable: {type(value).__name__}")


class RunLog:
    """
    History, stored results and counters of one command run.

    Attributes:
        run_id (str): Unique identifier (format: run_YYYYMMDD_HHMMSS)
        history (list): Step messages with role, content, timestamp and metadata
        run_data (dict): Run-level data: command, config, results, counters
        max_history_length (int): Maximum number of messages to retain

    Example:
        >>> log = RunLog(command='spectrum')
        >>> log.add_message('system', 'building K_op at N=256')
        >>> log.store_result('k_op', {'n_negative': 1, 'n_zero': 1})
        >>> log.add_artifact('output/spectrum_K_op.csv')
        >>> path = log.save_to_file('output')
    """

    def __init__(self, command: str = '', run_id: Optional[str] = None,
                 max_history_length: int = 200):
        """
        Start a new run record.

        Args:
            command (str): CLI subcommand being run.
            run_id (str, optional): Existing identifier to reuse. If None, creates new.
            max_history_length (int): Maximum messages to retain (default: 200)
        """
        self.run_id = run_id or f"run_{datetime.now().strftime('%Y%m%d_%H%M%S')}"
        self.history: List[Dict[str, Any]] = []
        self.max_history_length = max_history_length
        now = datetime.now().isoformat()
        self.run_data: Dict[str, Any] = {
            'run_id': self.run_id,
            'command': command,
            'created_at': now,
            'last_updated': now,
            'artifacts': [],
            'results': {},
            'counters': {},
        }

    def _touch(self):
        self.run_data['last_updated'] = datetime.now().isoformat()

    def add_message(self, role: str, content: str, metadata: Optional[Dict] = None):
        """
        Append a step message, trimming the oldest beyond max_history_length.

        Args:
            role (str): 'user', 'system' or 'warning'
            content (str): Message text
            metadata (dict, optional): Extra fields, e.g. {'L': 3.14}
        """
        self.history.append({
            'role': role,
            'content': content,
            'timestamp': datetime.now().isoformat(),
            'metadata': metadata or {},
        })
        if len(self.history) > self.max_history_length:
            self.history = self.history[-self.max_history_length:]
        self._touch()

    def store_result(self, key: str, value: Any):
        """Store a JSON-serializable result under key."""
        self.run_data['results'][key] = value
        self._touch()

    def add_artifact(self, path):
        """Record a file written by the run."""
        self.run_data['artifacts'].append(str(path))
        self.increment('artifacts_written')

    def increment(self, counter: str, amount: int = 1):
        """
        Increase a named counter, creating it at zero.

        Example:
            >>> log.increment('profiles_sampled')
        """
        counters = self.run_data['counters']
        counters[counter] = counters.get(counter, 0) + amount
        self._touch()

    def get_run_stats(self) -> Dict[str, Any]:
        """
        Run statistics and metadata.

        Returns:
            dict: run_id, command, timestamps, message count, artifact count, counters
        """
        return {
            'run_id': self.run_id,
            'command': self.run_data['command'],
            'created_at': self.run_data['created_at'],
            'last_updated': self.run_data['last_updated'],
            'message_count': len(self.history),
            'artifact_count': len(self.run_data['artifacts']),
            'counters': dict(self.run_data['counters']),
        }

    def save_to_file(self, output_dir: str = 'output') -> Path:
        """
        Persist the run record as run_<id>.json in output_dir.

        Returns:
            Path: The file written.
        """
        directory = Path(output_dir)
        directory.mkdir(parents=True, exist_ok=True)
        filepath = directory / f"{self.run_id}.json"
        data = {'run_data': self.run_data, 'history': self.history}
        with open(filepath, 'w', encoding='utf-8') as f:
            json.dump(data, f, indent=2, default=json_default)
        return filepath

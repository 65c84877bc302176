from .config import TrialConfig
from .events import EventLog
from .giver import OracleGiver, ScriptedGiver
from .metrics import compute_metrics
from .runner import Trial, TrialRecord, run_trial
from .export import export_artifacts

__all__ = [
    "EventLog",
    "OracleGiver",
    "ScriptedGiver",
    "Trial",
    "TrialConfig",
    "TrialRecord",
    "compute_metrics",
    "export_artifacts",
    "run_trial",
]

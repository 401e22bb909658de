from .config import PRESETS, RunConfig, dump_config, from_dict, load_config, to_dict
from .commands import build_clients, cmd_analyze, cmd_probe, cmd_run, cmd_sweep
from .main import main

__all__ = ['PRESETS', 'RunConfig', 'dump_config', 'from_dict', 'load_config', 'to_dict',
           'build_clients', 'cmd_analyze', 'cmd_probe', 'cmd_run', 'cmd_sweep', 'main']

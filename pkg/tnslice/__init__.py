__version__ = '0.1.0'

from .exceptions import *
from .model import TnQosClass, Color, Packet, QosMapEntry, MappingTable, classify, map_to_tn_class
from .scenario import Scenario, load_scenario, from_dict
from .engine import run, run_many, check_conservation
from .metrics import MetricsStore, export, load_exported, compare_dirs, interval_summary, peak_latency
from .fluid import fluid_rates
from .presets import preset, list_presets

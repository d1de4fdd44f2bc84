from .events import Event, EventQueue
from .link import Link
from .traffic import Burst, FlowGen, gen_events
from .node import Port, Forwarder, Sink, EdgeNode, HctnsIngress, IetfIngress, LinIngress
from .simulator import Simulation, run, run_many, check_conservation

__all__ = ['Event', 'EventQueue', 'Link', 'Burst', 'FlowGen', 'gen_events',
			'Port', 'Forwarder', 'Sink', 'EdgeNode', 'HctnsIngress', 'IetfIngress', 'LinIngress',
			'Simulation', 'run', 'run_many', 'check_conservation']

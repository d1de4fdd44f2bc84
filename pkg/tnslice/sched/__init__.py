from .drr import Fifo, DrrQueue, Drr
from .bank import QueueBank, build_bank, bank_enqueue, bank_dequeue, DEFAULT_BANK, LIN_BANK
from .hier import SliceDrr, HierDrrBank, build_hier, hier_enqueue, hier_dequeue

__all__ = ['Fifo', 'DrrQueue', 'Drr',
			'QueueBank', 'build_bank', 'bank_enqueue', 'bank_dequeue',
			'DEFAULT_BANK', 'LIN_BANK',
			'SliceDrr', 'HierDrrBank', 'build_hier', 'hier_enqueue', 'hier_dequeue']

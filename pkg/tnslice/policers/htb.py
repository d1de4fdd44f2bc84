from collections import deque, namedtuple
import logging
import warnings
from ..base import MAX_FRAME, QUEUE_CAP_DEFAULT, QUANTUM_DEFAULT, INFINITE, \
				rate, size, isDict, isList
from ..exceptions import CirSumExceeded, MissingGlobal, UnknownLeaf, ValidationError
from .bucket import Bucket

__all__ = ['PolicerNode', 'PolicerTree', 'Admission', 'build_tree', 'offer',
			'try_borrow', 'can_borrow', 'charge_ancestors', 'drain', 'next_wake',
			'GLOBAL', 'SLICE', 'CLASS', 'ADMITTED', 'QUEUED', 'DROPPED']

logger = logging.getLogger(__name__)

GLOBAL, SLICE, CLASS = 'Global', 'Slice', 'Class'
ADMITTED, QUEUED, DROPPED = 'Admitted', 'Queued', 'Dropped'

Admission = namedtuple('Admission', ['status', 'at'])
_QUEUED = Admission(QUEUED, None)
_DROPPED = Admission(DROPPED, None)


class PolicerNode:
	"""
	One policer of the global -> slice -> class hierarchy.

	cir and pir are the two buckets (capacities CBS and PBS). Only
	leaves own a queue. quantum and priority are None when unset: an
	unset priority inherits the best of the competing children and an
	unset quantum weighs as the sum over its backlogged children, so
	quanta given only on the leaves share excess per leaf.

	lag is how far below zero the CIR bucket may sit while the node
	still passes requests up to its parent. Committed children charge
	it a frame at a time, so it is one frame per committed child beyond
	the CBS. Debt past lag stops all borrowing through the node.
	"""
	def __init__(self, name, level, cir, pir, cbs, pbs, quantum = None,
				priority = None, queue_cap = QUEUE_CAP_DEFAULT, parent = None):
		self.name = name
		self.level = level
		self.cir = Bucket(cir, cbs)
		self.pir = Bucket(pir, pbs)
		self.quantum = quantum
		self.priority = priority
		self.queue = deque()
		self.queue_cap = queue_cap
		self.parent = parent
		self.children = []
		self.order = 0
		self.depth = 0 if parent is None else parent.depth + 1
		self.lag = 0

		# DRR state this node keeps as a child of its parent
		self.deficit = 0
		self.turn = False
		# backlogged children in round robin order
		self.active = []

		self.offered = 0
		self.admitted = 0
		self.admitted_bytes = 0
		self.borrowed = 0
		self.dropped = 0

	@property
	def leaf(self):
		return not self.children

	@property
	def drops(self):
		return self.dropped

	def __len__(self):
		return len(self.queue)

	def path(self):
		node = self
		while node is not None:
			yield node
			node = node.parent

	def refill(self, now):
		self.cir.refill(now)
		self.pir.refill(now)

	def __repr__(self):
		return 'PolicerNode({}, cir={}, pir={}, queued={})'.format(
			self.name, self.cir.tokens, self.pir.tokens, len(self.queue))


class PolicerTree:
	def __init__(self, root):
		self.root = root
		self.nodes = []
		self.leaves = {}
		self.leaf_nodes = []

	def add(self, node, key = None):
		node.order = len(self.nodes)
		self.nodes.append(node)
		if node.parent is not None:
			node.parent.children.append(node)
		if key is not None:
			self.leaves[key] = node
		return node

	def seal(self):
		self.leaf_nodes = [n for n in self.nodes if n.leaf]

	def leaf(self, key):
		node = self.leaves.get(key)
		if node is None:
			# a slice without classes polices every class it carries
			node = self.leaves.get((key[0], None))
			if node is None:
				raise UnknownLeaf(key)
		return node

	def refill(self, now):
		for node in self.nodes:
			node.refill(now)

	def queued(self):
		return sum(len(n.queue) for n in self.leaf_nodes)

	def queue_ids(self):
		return [(n.name, n) for n in self.leaf_nodes]


"""
------------------------------------------------------------
Building
Updated 19/10/2026
------------------------------------------------------------
"""
def _node_args(spec, where, frame, parent_pir):
	if not isDict(spec):
		raise ValidationError('Policer entry {} must be a mapping.'.format(where))
	if 'cir' not in spec:
		raise ValidationError('Policer {} needs a cir.'.format(where))
	try:
		cir = rate(spec['cir'])
		pir = rate(spec['pir']) if spec.get('pir') is not None else parent_pir
		if pir is None:
			pir = cir
		cbs = size(spec['cbs']) if spec.get('cbs') is not None else frame
		pbs = size(spec['pbs']) if spec.get('pbs') is not None else frame
	except ValueError as error:
		raise ValidationError('Policer {}: {}'.format(where, error))

	quantum = spec.get('quantum')
	if quantum is not None:
		quantum = size(quantum)
		if quantum <= 0:
			raise ValidationError('Policer {} quantum must be positive.'.format(where))
	priority = spec.get('priority')
	if priority is not None:
		priority = int(priority)

	if pir < cir:
		warnings.warn('Policer {} has a PIR below its CIR. Peak traffic will be '
					'capped at the PIR.'.format(where))
	return dict(cir = cir, pir = pir, cbs = cbs, pbs = pbs,
				quantum = quantum, priority = priority)


def _check_sum(node, specs):
	total = sum(s['cir'] for s in specs)
	if total > node.cir.rate:
		raise CirSumExceeded(node.name, total, node.cir.rate)


def build_tree(spec, frame = MAX_FRAME):
	"""
	Builds the global -> slice -> class policer tree.

	spec = {
		'global': {'cir': '100 Mbps', 'cbs': 1538, 'pbs': 1538},
		'queue_cap': 1000,
		'slices': [
			{'name': 'ToD', 'cir': '36 Mbps', 'pir': '100 Mbps',
			 'classes': [{'name': 'Video', 'cir': '32 Mbps', ...}, ...]},
			{'name': 'URLLC', 'cir': '1.2 Mbps', 'pir': '100 Mbps'},
		]
	}
	CBS and PBS default to one frame, which is how burst control is
	switched off. The global PIR always equals its CIR.
	"""
	if not isDict(spec) or not isDict(spec.get('global')) or \
		spec['global'].get('cir') is None:
		raise MissingGlobal()
	slices = spec.get('slices') or []
	if not isList(slices) or len(slices) == 0:
		raise ValidationError('The policer needs at least one slice.')
	queue_cap = int(spec.get('queue_cap', QUEUE_CAP_DEFAULT))

	g = _node_args(spec['global'], 'global', frame, None)
	if spec['global'].get('pir') is not None and g['pir'] != g['cir']:
		warnings.warn('The global policer PIR is always its CIR. Ignoring pir.')
	root = PolicerNode('global', GLOBAL, g['cir'], g['cir'], g['cbs'], g['pbs'],
						g['quantum'], g['priority'], queue_cap)
	tree = PolicerTree(root)
	tree.add(root)

	parsed = []
	for s in slices:
		name = s.get('name') if isDict(s) else None
		if name is None:
			raise ValidationError('Every slice policer needs a name.')
		args = _node_args(s, name, frame, root.pir.rate)
		parsed.append((name, s, args))

	if len(set(p[0] for p in parsed)) != len(parsed):
		raise ValidationError('Slice policer names must be unique.')
	_check_sum(root, [p[2] for p in parsed])

	for name, s, args in parsed:
		classes = s.get('classes') or []
		cap = int(s.get('queue_cap', queue_cap))
		node = PolicerNode(name, SLICE, parent = root, queue_cap = cap, **args)
		tree.add(node, key = None if classes else (name, None))

		kids = []
		for c in classes:
			cname = c.get('name') if isDict(c) else None
			if cname is None:
				raise ValidationError('Every class policer in {} needs a name.'.format(name))
			if c.get('classes'):
				raise ValidationError('Class {}/{} cannot have classes: the tree is at '
									'most three levels deep.'.format(name, cname))
			where = '{}/{}'.format(name, cname)
			kids.append((cname, c, _node_args(c, where, frame, node.pir.rate)))

		if len(set(k[0] for k in kids)) != len(kids):
			raise ValidationError('Class policer names in {} must be unique.'.format(name))
		_check_sum(node, [k[2] for k in kids])

		for cname, c, args in kids:
			leaf = PolicerNode('{}/{}'.format(name, cname), CLASS, parent = node,
								queue_cap = int(c.get('queue_cap', cap)), **args)
			tree.add(leaf, key = (name, cname))

	tree.seal()
	for node in tree.nodes:
		if not node.leaf and node.parent is not None:
			committed = sum(1 for c in node.children if c.cir.rate > 0)
			node.lag = max(0, frame * committed - node.cir.capacity)
	for leaf in tree.leaf_nodes:
		if leaf.cir.capacity < frame and leaf.cir.rate > 0 or leaf.pir.capacity < frame:
			warnings.warn('Policer {} has a bucket smaller than one {} B frame and '
						'can never admit a full frame.'.format(leaf.name, frame))
	return tree


"""
------------------------------------------------------------
Admission
Updated 19/10/2026
------------------------------------------------------------
"""
def charge_ancestors(node, nbytes):
	"""
	Takes nbytes from both buckets of node and every node above it.
	Balances may go negative: a parent in debt stops lending until
	refill pays it back.
	"""
	while node is not None:
		before = node.cir.tokens
		node.cir.tokens -= nbytes
		node.pir.tokens -= nbytes
		if before >= 0 and node.cir.tokens < 0:
			logger.debug('%s is %d B in debt', node.name, -node.cir.tokens)
		node = node.parent


def _lender(node, nbytes):
	# first node up the chain whose own CIR would fund the request
	while node is not None:
		if node.parent is None:
			return node if node.cir.tokens >= nbytes else None
		if node.pir.tokens < 0:
			return None
		if node.cir.tokens >= nbytes:
			return node
		if node.cir.tokens < -node.lag:
			return None
		node = node.parent
	return None


def can_borrow(node, nbytes):
	return _lender(node, nbytes) is not None


def try_borrow(node, nbytes, now = None):
	"""
	Asks node (a non-leaf ancestor) for nbytes. The node first checks
	its PIR bucket, then its CIR bucket, and escalates to its parent if
	its own CIR is short. A node whose PIR balance is negative, or
	whose CIR debt is deeper than its lag, refuses.

	On success the granting node pays from both buckets (and charges
	everything above it) while each node it escalated through pays
	from its PIR bucket only.
	"""
	if now is not None:
		for n in node.path():
			n.refill(now)

	lender = _lender(node, nbytes)
	if lender is None:
		return False
	while node is not lender:
		node.pir.tokens -= nbytes
		node = node.parent
	lender.cir.tokens -= nbytes
	lender.pir.tokens -= nbytes
	charge_ancestors(lender.parent, nbytes)
	return True


def _admit(leaf, nbytes, now):
	if leaf.pir.tokens < nbytes:
		return False
	if leaf.cir.tokens >= nbytes:
		leaf.cir.tokens -= nbytes
		leaf.pir.tokens -= nbytes
		charge_ancestors(leaf.parent, nbytes)
		return True
	if leaf.parent is not None and try_borrow(leaf.parent, nbytes, now):
		leaf.pir.tokens -= nbytes
		_charge_borrowed(leaf, nbytes)
		return True
	return False


def _count(leaf, pkt):
	leaf.admitted += 1
	leaf.admitted_bytes += pkt.size


def offer(tree, leaf, pkt, now):
	"""
	Presents pkt to the policer of leaf = (slice, class).

	A leaf with a backlog appends (or drops when full) so FIFO order
	holds. Otherwise the packet is admitted at once when the leaf PIR
	bucket has room and either the leaf CIR bucket has room (the
	ancestors are charged regardless of their balance) or an ancestor
	lends. Anything else waits in the leaf queue.
	"""
	node = tree.leaf(leaf)
	node.offered += 1
	if node.queue:
		if len(node.queue) >= node.queue_cap:
			node.dropped += 1
			return _DROPPED
		node.queue.append(pkt)
		return _QUEUED

	for n in node.path():
		n.refill(now)
	if _admit(node, pkt.size, now):
		_count(node, pkt)
		return Admission(ADMITTED, now)

	if node.queue_cap <= 0:
		node.dropped += 1
		return _DROPPED
	node.queue.append(pkt)
	return _QUEUED


"""
------------------------------------------------------------
Excess sharing
	>>> Priority partitions first (lower wins).
	>>> Deficit round robin by quantum within a priority level.
	>>> Every borrowed byte is charged to the deficit of each node
		from the leaf up to its slice, whoever lent it.
	>>> Equal priority and quantum go by arrival in the backlog.
Updated 19/10/2026
------------------------------------------------------------
"""
# deficits never sink below this many quanta
DEFICIT_FLOOR = 4


def _backlogged(node):
	if node.leaf:
		return bool(node.queue)
	return any(_backlogged(c) for c in node.children)


def _priority(node, marked):
	if node.priority is not None:
		return node.priority
	if node.leaf:
		return 0
	return min(_priority(c, marked) for c in node.children if c in marked)


def _quantum(node):
	if node.quantum is not None:
		return node.quantum
	if node.leaf:
		return QUANTUM_DEFAULT
	return sum(_quantum(c) for c in node.children if _backlogged(c)) or QUANTUM_DEFAULT


def _charge_borrowed(leaf, nbytes):
	leaf.borrowed += nbytes
	node = leaf
	while node.parent is not None:
		node.deficit = max(node.deficit - nbytes, -DEFICIT_FLOOR * _quantum(node))
		node = node.parent


def _refresh(node):
	"""Drops children that went idle and appends new backlogs at the tail."""
	active = []
	for c in node.active:
		if _backlogged(c):
			active.append(c)
		else:
			c.deficit = 0
			c.turn = False
	for c in node.children:
		if c not in active and _backlogged(c):
			c.deficit = 0
			c.turn = False
			active.append(c)
	node.active = active


def _choose(node, marked):
	"""
	Leaf below node whose head packet goes next. Children outside
	marked, or outside the best priority among marked, are passed over
	but keep their place, deficit and turn.
	"""
	if node.leaf:
		return node
	_refresh(node)
	active = node.active
	best = min(_priority(c, marked) for c in active if c in marked)

	while True:
		for c in list(active):
			if c not in marked or _priority(c, marked) != best:
				continue
			leaf = _choose(c, marked)
			if not c.turn:
				c.deficit += _quantum(c)
				c.turn = True
			if c.deficit >= leaf.queue[0].size:
				return leaf
			c.turn = False
			active.remove(c)
			active.append(c)


def drain(tree, now):
	"""
	Releases every queued packet that tokens allow at time now.

	Leaves spending their own CIR go first, one packet per leaf per
	round. Borrowing follows: requests funded by a slice are served
	before requests that reach the global policer, and requests that
	compete for the same lender are picked by priority then quantum.
	Returns [(packet, now), ...] in admission order.
	"""
	tree.refill(now)
	out = []

	leaves = [l for l in tree.leaf_nodes if l.queue]
	while leaves:
		keep = []
		for leaf in leaves:
			pkt = leaf.queue[0]
			n = pkt.size
			if leaf.pir.tokens >= n and leaf.cir.tokens >= n:
				leaf.queue.popleft()
				leaf.cir.tokens -= n
				leaf.pir.tokens -= n
				charge_ancestors(leaf.parent, n)
				_count(leaf, pkt)
				out.append((pkt, now))
				if leaf.queue:
					keep.append(leaf)
		leaves = keep

	while True:
		lenders = {}
		for leaf in tree.leaf_nodes:
			if not leaf.queue or leaf.parent is None:
				continue
			n = leaf.queue[0].size
			if leaf.pir.tokens < n or leaf.cir.tokens >= n:
				continue
			lender = _lender(leaf.parent, n)
			if lender is not None:
				lenders.setdefault(lender, []).append(leaf)
		if not lenders:
			break

		lender = max(lenders, key = lambda x: (x.depth, -x.order))
		marked = set()
		for leaf in lenders[lender]:
			node = leaf
			while node is not lender:
				marked.add(node)
				node = node.parent

		leaf = _choose(lender, marked)
		pkt = leaf.queue.popleft()
		n = pkt.size
		try_borrow(leaf.parent, n)
		leaf.pir.tokens -= n
		_charge_borrowed(leaf, n)
		_count(leaf, pkt)
		out.append((pkt, now))
	return out


def _borrow_time(node, nbytes):
	if node is None:
		return INFINITE
	if node.parent is None:
		return node.cir.time_until(nbytes)
	escalate = max(node.cir.time_until(-node.lag), _borrow_time(node.parent, nbytes))
	return max(node.pir.time_until(0), min(node.cir.time_until(nbytes), escalate))


def next_wake(tree, now):
	"""
	Earliest instant after now at which some backlogged leaf could
	release its head packet if nothing else consumed tokens first.
	INFINITE when nothing is queued or nothing will ever be admissible.
	"""
	tree.refill(now)
	best = INFINITE
	for leaf in tree.leaf_nodes:
		if not leaf.queue:
			continue
		n = leaf.queue[0].size
		t = max(leaf.pir.time_until(n),
				min(leaf.cir.time_until(n), _borrow_time(leaf.parent, n)))
		if t < best:
			best = t
	return INFINITE if best == INFINITE else now + best

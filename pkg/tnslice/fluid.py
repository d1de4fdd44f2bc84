import numpy as np
from .base import MAX_FRAME, QUANTUM_DEFAULT, rate as _rate
from .policers.htb import build_tree

__all__ = ['fluid_rates', 'fluid_schedule']

EPS = 1e-6
# bisection steps when solving for the round robin level
LEVEL_STEPS = 200


class _Fill:
	"""
	Rates of one fluid solve.
		got:		admitted bps per leaf
		want:		bps a leaf still takes before its demand or PIR
		room:		bps left under the PIR of a non-leaf node
		borrowed:	bps a node's subtree took above its own CIR
		hungry:		leaves offered more than they get
	"""
	def __init__(self, tree, load, hungry):
		self.tree = tree
		self.load = load
		self.hungry = hungry
		self.got, self.want = {}, {}
		for leaf in tree.leaf_nodes:
			demand = min(load.get(leaf, 0.0), float(leaf.pir.rate))
			own = min(demand, float(leaf.cir.rate))
			self.got[leaf] = own
			self.want[leaf] = demand - own
		self.room = {}
		for node in tree.nodes:
			if not node.leaf:
				used = sum(self.got[l] for l in tree.leaf_nodes if node in set(l.path()))
				self.room[node] = max(float(node.pir.rate) - used, 0.0)
		self.borrowed = {node: 0.0 for node in tree.nodes}


	def cap(self, node):
		if node.leaf:
			return self.want[node]
		return min(self.room[node], sum(self.cap(c) for c in node.children))


	def priority(self, node):
		if node.priority is not None:
			return node.priority
		if node.leaf:
			return 0
		return min(self.priority(c) for c in node.children if self.cap(c) > EPS)


	def backlogged(self, node):
		if node.leaf:
			return node in self.hungry
		return any(self.backlogged(c) for c in node.children)


	def quantum(self, node):
		if node.quantum is not None:
			return node.quantum
		if node.leaf:
			return QUANTUM_DEFAULT
		return sum(self.quantum(c) for c in node.children if self.backlogged(c)) or QUANTUM_DEFAULT


	def give(self, node, bps):
		self.borrowed[node] += bps
		if node.leaf:
			self.got[node] += bps
			self.want[node] -= bps
		else:
			self.room[node] -= bps
			self.spread(node, bps)


	def spread(self, node, budget):
		"""
		Water-fills budget bps over the children of node and returns
		what they took. Priority groups fill in turn. Inside a group a
		child at level L takes L * quantum less what its subtree
		already borrowed, within its cap.
		"""
		used = 0.0
		while budget > EPS:
			kids = [c for c in node.children if self.cap(c) > EPS]
			if not kids:
				break
			best = min(self.priority(c) for c in kids)
			group = [c for c in kids if self.priority(c) == best]

			q = np.array([self.quantum(c) for c in group], dtype = float)
			off = np.array([self.borrowed[c] for c in group])
			cap = np.array([self.cap(c) for c in group])
			total = min(budget, cap.sum())
			g = _level_fill(q, off, cap, total)

			given = 0.0
			for c, bps in zip(group, g):
				if bps > EPS:
					self.give(c, bps)
					given += bps
			if given <= EPS:
				break
			budget -= given
			used += given
		return used


def _level_fill(q, off, cap, total):
	# smallest level whose fill reaches total
	def fill(level):
		return np.clip(level * q - off, 0, cap)

	lo, hi = 0.0, float(((off + cap) / q).max())
	for _ in range(LEVEL_STEPS):
		mid = (lo + hi) / 2
		if fill(mid).sum() < total:
			lo = mid
		else:
			hi = mid
	return fill(hi)


def _solve(tree, load, hungry):
	f = _Fill(tree, load, hungry)
	root = tree.root

	for s in root.children:
		if s.leaf:
			continue
		spare = float(s.cir.rate) - sum(f.got[c] for c in s.children)
		spare = min(spare, f.room[s])
		if spare <= EPS:
			continue
		used = f.spread(s, spare)
		f.borrowed[s] += used
		f.room[s] -= used
		f.room[root] -= used

	remaining = min(float(root.cir.rate) - sum(f.got.values()), f.room[root])
	if remaining > EPS:
		f.spread(root, remaining)
	return f.got


def fluid_rates(spec, offered, frame = MAX_FRAME):
	"""
	Steady-state admitted rate of every HCTNS leaf under constant
	offered load, burst control off.

	spec is a policer section as build_tree takes it. offered maps
	(slice, class) keys (class None for a slice without classes) to
	bps; rates may carry units. Returns {key: bps} for every leaf
	and every offered key.

		1. Each leaf gets min(offered, CIR, PIR).
		2. Slice CIR its classes leave unused goes to the slice's hungry
		   classes.
		3. The global CIR left over is water-filled over slices then
		   classes, priority first, then by quantum, within every PIR.
		   Slice CIR a slice already lent inside counts against its
		   share, as do bytes a group of better priority took.

	A leaf weighs in its parent's quantum while it is offered more than
	it gets, so the solve repeats until that set settles.
	"""
	tree = build_tree(spec, frame)
	keys = {leaf: key for key, leaf in tree.leaves.items()}
	load = {}
	for key, bps in offered.items():
		leaf = tree.leaf(key)
		load[leaf] = load.get(leaf, 0.0) + float(_rate(bps))

	hungry = frozenset(l for l in tree.leaf_nodes if load.get(l, 0.0) > l.cir.rate)
	for _ in range(len(tree.leaf_nodes) + 1):
		got = _solve(tree, load, hungry)
		settled = frozenset(l for l in tree.leaf_nodes
							if load.get(l, 0.0) - got[l] > EPS * max(1.0, load.get(l, 0.0)))
		if settled == hungry:
			break
		hungry = settled

	out = {keys[leaf]: got[leaf] for leaf in tree.leaf_nodes}
	# keys that reach a leaf through its slice get that leaf's rate
	for key in offered:
		out[key] = got[tree.leaf(key)]
	return out


def fluid_schedule(spec, flows, schedule, intervals):
	"""
	fluid_rates for each (start, stop) interval of a scenario: a flow
	offers its rate in an interval when one of its schedule spans
	covers it. flows = {name: ((slice, class), bps)}; times in seconds.
	Returns one {flow: bps} per interval.
	"""
	out = []
	for start, stop in intervals:
		mid = (start + stop) / 2
		offered, owners = {}, {}
		for name, (key, bps) in flows.items():
			spans = schedule.get(name, [(0, float('inf'))])
			if any(a <= mid < b for a, b in spans):
				offered[key] = offered.get(key, 0) + _rate(bps)
				owners.setdefault(key, []).append((name, _rate(bps)))
		rates = fluid_rates(spec, offered)
		share = {}
		for key, members in owners.items():
			total = sum(b for _, b in members)
			for name, b in members:
				share[name] = rates[key] * b / total if total else 0.0
		out.append({name: share.get(name, 0.0) for name in flows})
	return out

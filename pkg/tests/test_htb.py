import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from tnslice.base import MAX_FRAME, SECOND, MS, BITS_NS
from tnslice.exceptions import CirSumExceeded, MissingGlobal, UnknownLeaf, ValidationError
from tnslice.model import Packet
from tnslice.policers.htb import build_tree, offer, drain, next_wake, try_borrow, can_borrow, \
				_choose, ADMITTED, QUEUED, DROPPED, DEFICIT_FLOOR
from tnslice.presets import hctns_policer
from replay import replay_backlogged, replay_mixed

n = MAX_FRAME


def _pkt(i = 0, size = MAX_FRAME):
	return Packet(i, 'f', size, None, 0, 0)


def _tree(slice_cir = '10 Mbps', classes = None, leaf = None, **glob):
	"""global -> S -> classes (L by default)."""
	if classes is None:
		classes = [dict({'name': 'L', 'cir': '5 Mbps', 'pir': '100 Mbps'}, **(leaf or {}))]
	g = dict({'cir': '100 Mbps'}, **glob)
	return build_tree({'global': g, 'slices': [
		{'name': 'S', 'cir': slice_cir, 'pir': '100 Mbps', 'cbs': glob.get('cbs'),
		 'pbs': glob.get('pbs'), 'classes': classes}]})


def test_build_preset_tree():
	tree = build_tree(hctns_policer())
	assert tree.root.cir.rate == 100 * 10**6
	assert tree.root.pir.rate == tree.root.cir.rate
	assert set(tree.leaves) == {('URLLC', None), ('ToD', 'Video'), ('ToD', 'Telemetry'),
								('eMBB', 'VC'), ('eMBB', 'BE')}
	# a slice without classes polices every class it carries
	assert tree.leaf(('URLLC', 'URLLC')) is tree.leaves[('URLLC', None)]
	assert tree.leaf(('ToD', 'Video')).parent.name == 'ToD'
	with pytest.raises(UnknownLeaf):
		tree.leaf(('Nope', 'x'))
	be = tree.leaf(('eMBB', 'BE'))
	assert be.cir.rate == 0 and be.pir.rate == 100 * 10**6
	assert be.cir.capacity == MAX_FRAME


def test_global_pir_defaults_to_its_cir(recwarn):
	tree = build_tree({'global': {'cir': '40 Mbps'}, 'slices': [{'name': 'a', 'cir': '1 Mbps'}]})
	assert tree.root.pir.rate == tree.root.cir.rate == 40 * 10**6
	# the slice inherits the global peak rate
	assert tree.leaves[('a', None)].pir.rate == 40 * 10**6
	assert not [w for w in recwarn if 'PIR' in str(w.message)]


def test_build_rejects_bad_trees():
	with pytest.raises(CirSumExceeded):
		build_tree({'global': {'cir': '100 Mbps'}, 'slices': [
			{'name': 'a', 'cir': '60 Mbps'}, {'name': 'b', 'cir': '60 Mbps'}]})
	with pytest.raises(CirSumExceeded):
		_tree(classes = [{'name': 'x', 'cir': '6 Mbps'}, {'name': 'y', 'cir': '6 Mbps'}])
	with pytest.raises(MissingGlobal):
		build_tree({'slices': [{'name': 'a', 'cir': '1 Mbps'}]})
	with pytest.raises(ValidationError):
		build_tree({'global': {'cir': '100 Mbps'}, 'slices': []})
	with pytest.raises(ValidationError):
		_tree(classes = [{'name': 'x', 'cir': '1 Mbps', 'classes': [{'name': 'y', 'cir': 0}]}])


def test_pir_below_cir_warns():
	with pytest.warns(UserWarning):
		_tree(leaf = {'pir': '1 Mbps'})


def test_burst_admitted_with_parents_at_zero():
	tree = _tree(leaf = {'cbs': '50 KB', 'pbs': '50 KB'})
	s = tree.root.children[0]
	tree.root.cir.tokens = 0
	s.cir.tokens = 0
	status, at = offer(tree, ('S', 'L'), _pkt(), 0)
	assert (status, at) == (ADMITTED, 0)
	assert s.cir.tokens == -n
	assert tree.root.cir.tokens == -n


def test_offer_borrows_when_own_cir_is_short():
	tree = _tree(leaf = {'cir': 0})
	leaf = tree.leaf(('S', 'L'))
	leaf.cir.tokens = 0
	assert offer(tree, ('S', 'L'), _pkt(), 0).status == ADMITTED
	assert leaf.borrowed == n
	assert leaf.admitted == 1


def test_offer_queues_without_peak_tokens():
	tree = _tree()
	leaf = tree.leaf(('S', 'L'))
	leaf.pir.tokens = 0
	assert offer(tree, ('S', 'L'), _pkt(), 0).status == QUEUED
	assert len(leaf.queue) == 1


def test_offer_behind_a_backlog_keeps_order_and_drops_when_full():
	tree = _tree(leaf = {'queue_cap': 2})
	leaf = tree.leaf(('S', 'L'))
	leaf.pir.tokens = 0
	statuses = [offer(tree, ('S', 'L'), _pkt(i), 0).status for i in range(4)]
	assert statuses == [QUEUED, QUEUED, DROPPED, DROPPED]
	assert [p.id for p in leaf.queue] == [0, 1]
	assert leaf.dropped == 2


def test_try_borrow_from_the_slice():
	tree = _tree(cbs = 20000, pbs = 20000)
	s = tree.root.children[0]
	s.cir.tokens = 10000
	assert try_borrow(s, n)
	assert s.cir.tokens == 10000 - n
	assert s.pir.tokens == 20000 - n
	assert tree.root.cir.tokens == 20000 - n


def test_slice_in_debt_never_lends():
	tree = _tree(cbs = 20000, pbs = 20000)
	s = tree.root.children[0]
	s.cir.tokens = -2000
	assert not can_borrow(s, n)
	assert not try_borrow(s, n)
	assert s.cir.tokens == -2000
	assert s.pir.tokens == 20000


def test_try_borrow_escalates_to_global():
	tree = _tree(cbs = 20000, pbs = 20000)
	s = tree.root.children[0]
	s.cir.tokens = 0
	tree.root.cir.tokens = 5000
	assert try_borrow(s, n)
	assert s.cir.tokens == 0
	assert s.pir.tokens == 20000 - n
	assert tree.root.cir.tokens == 5000 - n


def test_committed_classes_give_the_slice_a_lag():
	tree = build_tree(hctns_policer())
	tod, embb, urllc = (tree.leaf(k).parent for k in (('ToD', 'Video'), ('eMBB', 'BE'), ('URLLC', None)))
	assert (tod.lag, embb.lag) == (n, 0)
	assert urllc is tree.root
	tod.cir.tokens = -n
	assert can_borrow(tod, n)
	tod.cir.tokens = -n - 1
	assert not can_borrow(tod, n)


def test_lag_is_one_frame_per_committed_child_beyond_the_cbs():
	classes = [{'name': c, 'cir': '1 Mbps'} for c in 'xyz'] + [{'name': 'w', 'cir': 0}]
	assert _tree(classes = classes).root.children[0].lag == 2 * n
	assert _tree(classes = classes, cbs = 3 * n).root.children[0].lag == 0


def test_negative_peak_balance_stops_lending():
	tree = _tree(cbs = 20000, pbs = 20000)
	s = tree.root.children[0]
	s.pir.tokens = -1
	assert not can_borrow(s, n)
	s.pir.tokens = 0
	assert try_borrow(s, n)
	assert s.pir.tokens == -n


def _pair():
	tree = _tree(classes = [{'name': 'a', 'cir': 0}, {'name': 'b', 'cir': 0}])
	a, b = tree.leaf(('S', 'a')), tree.leaf(('S', 'b'))
	for i in range(3):
		a.queue.append(_pkt(i))
		b.queue.append(_pkt(10 + i))
	return tree.root.children[0], a, b


def test_passed_over_children_keep_their_turn():
	s, a, b = _pair()
	assert _choose(s, {a, b}) is a
	assert (a.turn, a.deficit) == (True, n)
	# a cannot borrow for now: b goes and a keeps its credit and place
	assert _choose(s, {b}) is b
	assert (a.turn, a.deficit) == (True, n)
	assert s.active == [a, b]
	a.deficit -= n
	assert _choose(s, {a, b}) is b
	assert s.active == [b, a]


def test_idle_children_leave_the_round():
	s, a, b = _pair()
	_choose(s, {a, b})
	a.queue.clear()
	assert _choose(s, {b}) is b
	assert s.active == [b]
	assert (a.turn, a.deficit) == (False, 0)


def test_borrowing_charges_deficits_up_to_the_slice_with_a_floor():
	tree = _tree(cbs = 10**6, pbs = 10**6, leaf = {'cir': 0, 'pbs': 10**6})
	leaf = tree.leaf(('S', 'L'))
	s = tree.root.children[0]
	leaf.cir.tokens = 0
	assert offer(tree, ('S', 'L'), _pkt(0), 0).status == ADMITTED
	assert (leaf.deficit, s.deficit) == (-n, -n)
	for i in range(1, 100):
		assert offer(tree, ('S', 'L'), _pkt(i), 0).status == ADMITTED
	assert leaf.deficit == -DEFICIT_FLOOR * n
	assert s.deficit == -DEFICIT_FLOOR * n
	assert tree.root.deficit == 0


def test_slice_spare_counts_against_the_global_share():
	tree = build_tree(hctns_policer())
	keys = [('ToD', 'Video'), ('ToD', 'Telemetry'), ('eMBB', 'BE')]
	window = SECOND // 2
	replay_backlogged(tree, keys, window)
	mbps = {k: tree.leaf(k).admitted_bytes * 8 * SECOND / window / 10**6 for k in keys}
	# BE lives on eMBB's own 52.8 Mbps and ToD takes all that is left
	assert mbps[('eMBB', 'BE')] == pytest.approx(52.8, rel = 0.02)
	assert mbps[('ToD', 'Video')] == pytest.approx(37.6, rel = 0.02)
	assert mbps[('ToD', 'Telemetry')] == pytest.approx(9.6, rel = 0.05)


def test_drain_without_backlog():
	tree = build_tree(hctns_policer())
	assert drain(tree, SECOND) == []
	assert next_wake(tree, SECOND) == float('inf')


def _debt_tree():
	"""L bursts 32 frames at 0 and drives S and the global into debt."""
	tree = _tree(classes = [
		{'name': 'L', 'cir': '5 Mbps', 'pir': '100 Mbps', 'cbs': 50000, 'pbs': 50000},
		{'name': 'M', 'cir': 0, 'pir': '100 Mbps'}])
	for i in range(32):
		assert offer(tree, ('S', 'L'), _pkt(i), 0).status == ADMITTED
	return tree


def test_burst_within_cbs_is_admitted_at_once():
	tree = _debt_tree()
	leaf = tree.leaf(('S', 'L'))
	assert len(leaf.queue) == 0
	assert leaf.cir.tokens == 50000 - 32 * n
	s = tree.root.children[0]
	assert s.cir.tokens == n - 32 * n
	assert tree.root.cir.tokens == n - 32 * n
	# the 33rd frame exceeds the burst
	assert offer(tree, ('S', 'L'), _pkt(33), 0).status == QUEUED


def test_debt_is_repaid_before_lending():
	tree = _debt_tree()
	m = tree.leaf(('S', 'M'))
	m.cir.tokens = 0
	assert offer(tree, ('S', 'M'), _pkt(99), 0).status == QUEUED

	# S owes 47678 B and refills at 10 Mbps
	repaid = 47678 * BITS_NS // (10 * 10**6)
	assert next_wake(tree, 0) == repaid
	assert drain(tree, repaid - 1) == []
	out = drain(tree, repaid)
	assert [p.id for p, _ in out] == [99]
	assert m.borrowed == n


def test_strict_priority_on_excess():
	spec = {'global': {'cir': '10 Mbps'}, 'slices': [{'name': 'S', 'cir': '10 Mbps', 'pir': '100 Mbps',
		'classes': [{'name': 'P0', 'cir': 0, 'pir': '100 Mbps', 'priority': 0},
					{'name': 'P7', 'cir': 0, 'pir': '100 Mbps', 'priority': 7}]}]}
	tree = replay_backlogged(build_tree(spec), [('S', 'P0'), ('S', 'P7')], SECOND // 2)
	assert tree.leaf(('S', 'P7')).borrowed == 0
	assert tree.leaf(('S', 'P0')).borrowed > 0.9 * 10**7 / 8 / 2 - 2 * n


def test_quantum_ratio_on_excess():
	spec = {'global': {'cir': '10 Mbps'}, 'slices': [{'name': 'S', 'cir': '10 Mbps', 'pir': '100 Mbps',
		'classes': [{'name': 'Video', 'cir': 0, 'pir': '100 Mbps', 'quantum': 15380},
					{'name': 'Telemetry', 'cir': 0, 'pir': '100 Mbps', 'quantum': 3076}]}]}
	tree = replay_backlogged(build_tree(spec), [('S', 'Video'), ('S', 'Telemetry')], 2 * SECOND)
	video = tree.leaf(('S', 'Video')).borrowed
	tel = tree.leaf(('S', 'Telemetry')).borrowed
	assert tel > 0
	assert video / tel == pytest.approx(5, rel = 0.02)


def test_equal_quanta_share_evenly_in_creation_order():
	spec = {'global': {'cir': '10 Mbps'}, 'slices': [{'name': 'S', 'cir': '10 Mbps', 'pir': '100 Mbps',
		'classes': [{'name': 'a', 'cir': 0, 'pir': '100 Mbps'},
					{'name': 'b', 'cir': 0, 'pir': '100 Mbps'}]}]}
	tree = replay_backlogged(build_tree(spec), [('S', 'a'), ('S', 'b')], SECOND)
	a, b = tree.leaf(('S', 'a')).borrowed, tree.leaf(('S', 'b')).borrowed
	assert abs(a - b) <= n


def _random_spec(rng):
	slices = []
	n_slices = rng.randint(1, 4)
	budget = rng.uniform(30, 90) * 10**6
	for i, w in enumerate(rng.dirichlet(np.ones(n_slices))):
		cir = int(w * budget)
		s = {'name': 's{}'.format(i), 'cir': cir, 'pir': int(rng.uniform(cir, 10**8)) + 1}
		if rng.rand() < 0.5:
			s['quantum'] = int(rng.randint(1, 6)) * n
		if rng.rand() < 0.3:
			s['priority'] = int(rng.randint(0, 2))
		k = rng.randint(0, 4)
		if k:
			classes = []
			fill = rng.uniform(0.3, 1.0)
			for j, cw in enumerate(rng.dirichlet(np.ones(k))):
				c = int(cw * cir * fill)
				leaf = {'name': 'c{}'.format(j), 'cir': c, 'pir': int(rng.uniform(c, 10**8)) + 1}
				if rng.rand() < 0.5:
					leaf['quantum'] = int(rng.randint(1, 6)) * n
				if rng.rand() < 0.3:
					leaf['priority'] = int(rng.randint(0, 2))
				classes.append(leaf)
			s['classes'] = classes
		slices.append(s)
	return {'global': {'cir': '100 Mbps'}, 'slices': slices}


def _adversary(rng, keys, window):
	"""Random bursts of up to 60 frames at random instants on every key."""
	arrivals = []
	for key in keys:
		for _ in range(rng.randint(0, 12)):
			t = int(rng.randint(0, window))
			arrivals.extend([(t, key)] * int(rng.randint(1, 60)))
	return sorted(arrivals, key = lambda a: (a[0], str(a[1])))


def _bursty(spec, rng):
	for s in spec['slices']:
		for node in [s] + s.get('classes', []):
			if rng.rand() < 0.5:
				node['cbs'] = int(rng.choice([2, 10, 30])) * n
				node['pbs'] = node['cbs'] + int(rng.randint(0, 3)) * n
	return spec


@pytest.mark.parametrize('seed', range(100))
def test_cir_guarantee_under_cross_traffic(seed):
	rng = np.random.RandomState(seed)
	tree = build_tree(_bursty(_random_spec(rng), rng))
	keys = sorted(tree.leaves, key = str)
	watched = [k for k in keys if rng.rand() < 0.5] or keys[:1]
	window = 200 * MS
	replay_mixed(tree, watched, _adversary(rng, keys, window), window)

	for key in watched:
		leaf = tree.leaves[key]
		floor = leaf.cir.rate * window // BITS_NS - n
		assert leaf.admitted_bytes >= floor, leaf
	for leaf in tree.leaf_nodes:
		assert 0 <= leaf.cir.tokens <= leaf.cir.capacity
		assert 0 <= leaf.pir.tokens <= leaf.pir.capacity
		assert leaf.offered == leaf.admitted + len(leaf.queue) + leaf.dropped


@pytest.mark.slow
@pytest.mark.parametrize('seed', range(5))
def test_global_cap_over_five_seconds(seed):
	rng = np.random.RandomState(500 + seed)
	tree = build_tree(_bursty(_random_spec(rng), rng))
	window = 5 * SECOND
	replay_backlogged(tree, list(tree.leaves), window)

	total = sum(l.admitted_bytes for l in tree.leaf_nodes)
	bursts = sum(node.cir.capacity for node in tree.nodes)
	assert total <= tree.root.cir.rate * window // BITS_NS + bursts + 2 * n


@pytest.mark.parametrize('pir', ['2 Mbps', '20 Mbps', '55 Mbps'])
def test_borrowing_is_capped_by_the_slice_pir(pir):
	spec = {'global': {'cir': '100 Mbps'}, 'slices': [
		{'name': 'S', 'cir': '1 Mbps', 'pir': pir, 'classes': [
			{'name': 'a', 'cir': 0, 'pir': '100 Mbps'}, {'name': 'b', 'cir': 0, 'pir': '100 Mbps'}]},
		{'name': 'T', 'cir': '10 Mbps', 'pir': '100 Mbps'}]}
	tree = build_tree(spec)
	window = SECOND
	replay_backlogged(tree, list(tree.leaves), window)
	s = tree.root.children[0]
	through = sum(c.admitted_bytes for c in s.children)
	assert through <= s.pir.rate * window // BITS_NS + s.pir.capacity + n
	assert through >= s.pir.rate * window // BITS_NS * 0.99
	assert s.pir.tokens >= -n


@settings(max_examples = 50, deadline = None)
@given(st.lists(st.tuples(st.integers(0, 4), st.integers(0, 2 * 10**6), st.booleans()), max_size = 80))
def test_leaf_buckets_stay_in_range(steps):
	tree = build_tree(hctns_policer(leaf_burst = 20000, slice_burst = 5000))
	keys = sorted(tree.leaves, key = str)
	now = 0
	for i, (k, dt, release) in enumerate(steps):
		now += dt
		offer(tree, keys[k], _pkt(i), now)
		if release:
			drain(tree, now)
		for node in tree.nodes:
			assert node.cir.tokens <= node.cir.capacity
			assert node.pir.tokens <= node.pir.capacity
		for leaf in tree.leaf_nodes:
			assert leaf.cir.tokens >= 0
			assert leaf.pir.tokens >= 0
			assert leaf.offered == leaf.admitted + len(leaf.queue) + leaf.dropped
		wake = next_wake(tree, now)
		assert wake >= now

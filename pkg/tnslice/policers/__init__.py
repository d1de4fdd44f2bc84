from .bucket import Bucket, refill
from .htb import PolicerNode, PolicerTree, Admission, build_tree, offer, \
				try_borrow, can_borrow, charge_ancestors, drain, next_wake
from .markers import TrTcmState, TwoColorState, trtcm_mark, two_color_mark
from .reference import ietf_ingress, lin_ingress, IetfDisposition, LinDisposition, \
				build_ietf, build_lin

__all__ = ['Bucket', 'refill',
			'PolicerNode', 'PolicerTree', 'Admission', 'build_tree', 'offer',
			'try_borrow', 'can_borrow', 'charge_ancestors', 'drain', 'next_wake',
			'TrTcmState', 'TwoColorState', 'trtcm_mark', 'two_color_mark',
			'ietf_ingress', 'lin_ingress', 'IetfDisposition', 'LinDisposition',
			'build_ietf', 'build_lin']

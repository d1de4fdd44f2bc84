from copy import copy
from torch.multiprocessing import Pool, cpu_count
from .base import isList
from .exceptions import ParallelReferenceError

__all__ = ['ParallelReference']

"""
------------------------------------------------------------
Parallel_Reference
	One argument is the "reference" list: f is called once per
	item of it, the other arguments are passed as they are.

Updated 19/10/2026
------------------------------------------------------------
"""
class ParallelReference:
	'''
	ParallelReference(f, n_jobs = 1, reference = 0)

	Eg:
		ParallelReference(run, n_jobs = 4)([s1, s2, s3], True)

		[s1, s2, s3] (index 0) acts as the reference, so run(s1, True),
		run(s2, True), ... are called, each in its own process when
		n_jobs > 1. Results come back in reference order.
	'''

	def __init__(self, f, n_jobs = 1, reference = 0):

		self.count = cpu_count()
		assert type(n_jobs) is int
		assert type(reference) is int

		if n_jobs == -1 or n_jobs > self.count:
			self.n_jobs = self.count
		else:
			self.n_jobs = max(n_jobs, 1)
		self.f = f
		self.reference = reference


	def __call__(self, *args):

		if self.reference >= len(args) or not isList(args[self.reference]) \
			or len(args[self.reference]) == 0:
			raise ParallelReferenceError()

		if self.n_jobs == 1 or len(args[self.reference]) == 1:
			args = list(args)
			output = []
			for j in copy(args[self.reference]):
				args[self.reference] = j
				output.append(self.f(*args))
			return output
		return self.multiprocess(*args)


	def multiprocess(self, *args):
		length = len(args[self.reference])
		n_jobs = min(self.n_jobs, length)

		toCall = []
		for i, x in enumerate(args):
			if i == self.reference:
				toCall.append(x)
				continue
			toCall.append([x]*length)

		with Pool(processes = n_jobs) as pool:
			output = pool.starmap(self.f, zip(*toCall))
		return output

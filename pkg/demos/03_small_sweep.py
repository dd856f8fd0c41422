# # Running every program up to a length
#
# We estimate a step budget by sampling, then run all programs of at most
# 22 bits, once in one piece and once split into three partitions that
# could have run on different machines.

from imp2.codec import count_programs
from imp2.runner import PartitionSpec, dumps_results, merge, sweep
from imp2.threshold import estimate_threshold

L = 22
est = estimate_threshold(L, samples=20000, seed=0)
print(est.dumps())

agg = sweep(L, est.threshold, seed=est.rng_seed)
print(agg.total_programs, count_programs(L))
for status, count in agg.status.items():
    print(f"{status.value:>20} {count}")

# Each produced string with its number of halting programs and the length
# of the shortest one found.

for output, halts, spf, first in agg.rows():
    print(f"{output or 'ε':>6} {halts:>6} {spf:>3} {first}")

# The three partitions merge back into exactly the same aggregate.

parts = [sweep(L, est.threshold, PartitionSpec(i, 3), seed=est.rng_seed) for i in range(3)]
print(dumps_results(merge(parts)) == dumps_results(agg))

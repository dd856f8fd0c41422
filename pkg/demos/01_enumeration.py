# # Numbering every IMP2 sentence
#
# Each natural number names exactly one sentence of the language, and each
# sentence has exactly one number. This script walks through the first few
# and looks up the positions of a few familiar statements.

from imp2.enumeration import pair_rank, pair_unrank, sentence_rank, sentence_unrank
from imp2.syntax import parse, to_text

# The basic building block is the pairing function, which lists pairs of
# naturals diagonal by diagonal.

for i in range(6):
    print(i, pair_unrank(i))
print(pair_rank(2, 1))

# Sentences are listed by cycling through the grammar rules in turn, so
# every rule gets its share of positions.

for n in range(12):
    print(n, to_text(sentence_unrank(n)))

# Some positions are far out. An assignment of a constant appears early,
# a multiplication a bit later, and a whole loop only around 1.8e22.

print(to_text(sentence_unrank(1405)))
print(to_text(sentence_unrank(142049)))
print(to_text(sentence_unrank(17972673899864641600766)))

# Going the other way, a factorial program sits at an index with 90 digits.

factorial = parse("""
(x[0] := 5;
 (x[1] := 1;
  (while (0 < x[0]) do
    (x[1] := (x[1] * x[0]);
     x[0] := (x[0] - 1)))))""")
n = sentence_rank(factorial)
print(n, len(str(n)))
assert sentence_unrank(n) == factorial

# # Programs as bit strings
#
# A program is a sentence index written in a self-delimiting code, followed
# by the raw input bits the sentence may read. Running it tells us whether
# it halts after reading exactly its input, and what it leaves in memory.

from imp2.codec import ProgramCode, count_programs, decode_program, encode_program
from imp2.enumeration import sentence_rank
from imp2.interpreter import execute
from imp2.syntax import parse

# The index part announces its own length, so a decoder always knows where
# the input starts.

p = ProgramCode(2, "01")
bits = encode_program(p)
print(bits, decode_program(bits))

# How many programs have at most 40 bits? The count has a closed form.

print(count_programs(40))

# A sentence that counts the leading ones of its input.

counter = parse("""
(x[0] := readbit;
 (while (readbit = 1) do
   x[0] := (x[0] + 1)))""")
n = sentence_rank(counter)

# With input 1110 it reads every bit and halts: memory holds 3, which is
# written as the bit string 00.

print(execute(ProgramCode(n, "1110")))

# With too few bits it tries to read past the end of its input.

print(execute(ProgramCode(n, "11")).status)

# With spare bits at the end it stops early. That program is an extension
# of a shorter one and does not count as a valid halt.

print(execute(ProgramCode(n, "10111")).status)

# Loops that revisit a configuration are caught; loops that keep growing
# run into the step budget.

print(execute(parse("(while true do skip)"), "").status)
print(execute(parse("(x[0] := 1 ; (while true do x[0] := (x[0] + 1)))"), "", threshold=1000).status)

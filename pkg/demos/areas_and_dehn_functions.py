"""Areas of null-homotopic words and the Dehn functions they add up to.

Commutator words in Z^2 need quadratically many relator applications, words
in a free group need none, and powers of the generator of C3 need one relator
per three letters. The last step compares the Z^2 table with reference
growth rates.
"""

from dehn.growth import classify_table
from dehn.presentation import combinatorial_area, cyclic_group, dehn_function, free_group, z2

P = z2()
print("Areas in <a, b | abAB>")
for n in range(1, 4):
    word = "a" * n + "b" * n + "A" * n + "B" * n
    print(f"  {word:<14} {combinatorial_area(P.parse_word(word), P)}")

print("\nDehn functions, n = 1..8")
for name, Q in [("Z^2", z2()), ("F_2", free_group(2)), ("C3", cyclic_group(3))]:
    table = dehn_function(Q, 8)
    print(f"  {name:<4}", [int(table[n]) for n in range(1, 9)])

print("\nWhich reference rates is the Z^2 table equivalent to on its window?")
report = classify_table(dehn_function(z2(), 8))
for name, rep in report.items():
    print(f"  {name:<12} {'equivalent' if rep.forward and rep.backward else 'not shown equivalent'}")
print("A window this short cannot separate neighbouring rates; the search reports what the data allows.")

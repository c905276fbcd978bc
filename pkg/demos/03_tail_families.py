"""Whole families at once: attach a growing tail and track one invariant P."""

from adespectra import family_t, ratfun_equal, tail_family, verify_family
from adespectra.measures import catalog_measure
from adespectra.recursion import SEEDS, cyclotomic_simplify, seed_builder, seed_family

for name, seed in SEEDS.items():
    fam = seed_family(name)
    ok = verify_family(fam, seed_builder(name), 4)
    print(f"{seed.description:12} P = {fam.P.format():40} recursion agrees k<=4: {bool(ok)}")

# F(2,1,2k) is E6 at k=1 and E8 at k=2; from k=3 on the graph has norm above 2
fam = tail_family([[2, 1], [1, 1]])
for k, label in [(1, "E6"), (2, "E8"), (3, "F(2,1,6)")]:
    print(f"{label:9}", cyclotomic_simplify(family_t(fam, k)).format())

print("k=1 is E6:", ratfun_equal(family_t(fam, 1), catalog_measure("E6").t_series))

"""Which T-series are combinations of cyclotomic atoms?"""

from adespectra import build_system, decompose_graph, verify_witness
from adespectra.cyclotomic import DecompositionProblem
from adespectra.measures import E7_T, CycloMeasure

for name in ["E6", "E6ext", "E7ext", "E8ext", "D1ext(7)", "E7", "E8"]:
    dec = decompose_graph(name)
    print(f"{name:9}", dec.summary())
    if dec.feasible and dec.nullity:
        print(f"{'':9} solution set has dimension {dec.nullity}; back-substitution gives",
              CycloMeasure(dec.rref_solution))
    if not dec.feasible:
        print(f"{'':9} certificate on columns", {k: str(v) for k, v in dec.witness.items()})

# the E7 system, printed as a table of half-coefficients c_0 .. c_9
system = build_system(DecompositionProblem(E7_T, 18))
print("\n      " + " ".join(f"{c:>4}" for c in system.columns))
for label, row in system.as_table().items():
    print(f"{label:5} " + " ".join(f"{str(v):>4}" for v in row))
print("certificate checks:", verify_witness(system, decompose_graph("E7").witness))

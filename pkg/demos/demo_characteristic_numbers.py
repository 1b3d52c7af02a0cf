"""Mod-2 cohomology rings, total Stiefel-Whitney classes and the rank-2
table of nine-dimensional generators.

Run:  python demos/demo_characteristic_numbers.py
"""

from warpbench import omega9_generator_table, ring_cpn, ring_wi, sw_number

for i in (1, 2, 3):
    ring = ring_wi(i)
    print(f"W{i} (dimension {ring.top_degree}): w = {ring.total_sw()}")
for n in (1, 2, 3):
    ring = ring_cpn(n)
    print(f"CP{n}: w = {ring.total_sw()}")

print("\ncharacteristic numbers detecting the nine-dimensional "
      "generators:")
mono_a = [{"index": 3, "exponent": 1}, {"index": 2, "exponent": 3}]
mono_b = [{"index": 7, "exponent": 1}, {"index": 2, "exponent": 1}]
w1, w2, cp2 = ring_wi(1), ring_wi(2), ring_cpn(2)
print(f"  w3 w2^3 (W2)       = {sw_number([w2], mono_a)}")
print(f"  w7 w2   (W2)       = {sw_number([w2], mono_b)}")
print(f"  w3 w2^3 (W1 x CP2) = {sw_number([w1, cp2], mono_a)}")
print(f"  w7 w2   (W1 x CP2) = {sw_number([w1, cp2], mono_b)}")

table = omega9_generator_table()
print("\ngenerator table:")
print(f"  columns: {table['columns']}")
for row, vals in zip(table["rows"], table["matrix"]):
    print(f"  {row:10s} {vals}")
print(f"  mod-2 rank: {table['rank']} (independent generators)")

print("\nthe detecting number is nonzero in every dimension 4i+1:")
for i in (1, 2, 3):
    mono = [{"index": 3, "exponent": 1},
            {"index": 2, "exponent": 2 * i - 1}]
    print(f"  w3 w2^{2 * i - 1} (W{i}) = {sw_number([ring_wi(i)], mono)}")

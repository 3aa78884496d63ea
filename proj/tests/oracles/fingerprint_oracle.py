#!/usr/bin/env python3
"""Independent reimplementation of the stable hash and the hashed fingerprints
for a few hand-built graphs. Its printed values are frozen in
tests/unit/fingerprints_test.cpp."""

MASK = (1 << 64) - 1
SEED = 0x9E3779B97F4A7C15
MULT = 0x100000001B3
WIDTH = 2048
ELEMENT = {"H": 0, "B": 1, "C": 2, "N": 3, "O": 4, "F": 5, "P": 6, "S": 7, "Cl": 8, "Br": 9, "I": 10}
BOND = {"-": 1, "=": 2, "#": 3, ":": 4}


def finalize(z):
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return z ^ (z >> 31)


def feed(state, data):
    for b in data:
        state = (state * MULT + b + 1) & MASK
    return state


def hash_ints(values):
    data = b"".join((v & MASK).to_bytes(8, "little") for v in values)
    return finalize(feed(SEED, data))


def hash_text(text):
    return finalize(feed(SEED, text.encode()))


# atoms: (element, charge, in_ring, hydrogens); bonds: (a, b, symbol)
def circular_bits(atoms, bonds, radius=2):
    adj = {i: [] for i in range(len(atoms))}
    for a, b, s in bonds:
        adj[a].append((b, BOND[s]))
        adj[b].append((a, BOND[s]))
    ids = [hash_ints([ELEMENT[e], len(adj[i]), q, int(r), h]) for i, (e, q, r, h) in enumerate(atoms)]
    bits = {x % WIDTH for x in ids}
    for rnd in range(radius):
        nxt = []
        for v in range(len(atoms)):
            env = sorted((cls, ids[nb]) for nb, cls in adj[v])
            vals = [rnd + 1, ids[v]]
            for cls, i in env:
                vals += [cls, i]
            nxt.append(hash_ints(vals))
        ids = nxt
        bits |= {x % WIDTH for x in ids}
    return sorted(bits)


def path_bits(paths):
    return sorted({hash_text(p) % WIDTH for p in paths})


if __name__ == "__main__":
    print("methane circular", circular_bits([("C", 0, False, 4)], []))
    print("ethanol circular",
          circular_bits([("C", 0, False, 3), ("C", 0, False, 2), ("O", 0, False, 1)], [(0, 1, "-"), (1, 2, "-")]))
    print("ethanol path", path_bits(["C-C", "C-O", "C-C-O"]))
    print("formaldehyde path", path_bits(["C=O"]))
    print("ethane path", path_bits(["C-C"]))
    print("methanol path", path_bits(["C-O"]))
    print("propanol path", path_bits(["C-C", "C-O", "C-C-C", "C-C-O", "C-C-C-O"]))
    print("propanol circular",
          circular_bits([("C", 0, False, 3), ("C", 0, False, 2), ("C", 0, False, 2), ("O", 0, False, 1)],
                        [(0, 1, "-"), (1, 2, "-"), (2, 3, "-")]))

"""Count plane trees, then sort the small ones by the order of their operator."""

from collections import Counter

from dessin_rh import annihilator_order, classify_tree, enumerate_plane_trees

for e in range(1, 9):
    print(f"e = {e}: {len(enumerate_plane_trees(e))} trees")

for e in range(1, 6):
    tally = Counter()
    for d in enumerate_plane_trees(e):
        order, _ = annihilator_order(d)
        tally[(str(classify_tree(d)).split("(")[0], order)] += 1
    print(f"e = {e}:", ", ".join(f"{k} order {o} x{c}" for (k, o), c in sorted(tally.items())))

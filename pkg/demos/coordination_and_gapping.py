"""Coordination chains, gapping, and expansion into simple sentences."""
from importlib.resources import files

from depgram import apply_gapping, detect_chains, expand_combinations, read_fdg, realize
from depgram.render import render_dot

figures = files("depgram.data.figures")

both = read_fdg((figures / "coordinated_elements.fdg").read_text())
for chain in detect_chains(both):
    print(chain.function, [both.nuclei[i].surface for i in chain.conjuncts])
for tree in expand_combinations(both):
    print("  ", realize(tree))

# cc edges are dashed: they mark equivalence, not dependency.
print(render_dot(both))

# In the gapped clause "and" stands in for "gave".
lecture = read_fdg((figures / "gapping_lecture.fdg").read_text())
frame, = apply_gapping(lecture).gap_frames
print("and inherits from", lecture.nuclei[frame.inherited_from].surface, frame.subcat)
for tree in expand_combinations(lecture):
    print("  ", realize(tree))

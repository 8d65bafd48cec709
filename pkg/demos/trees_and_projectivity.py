"""Nucleus trees, the axioms, and projectivity, step by step."""
from importlib.resources import files

from depgram import crossing_arcs, is_projective, marcus_violations, read_fdg, segment, load_rules
from depgram.render import render_ascii

figures = files("depgram.data.figures")

# A verb chain is one node, even when the subject splits it.
nuclei = segment("Did/AUX the/DET dog/N run/V in/PREP the/DET house/N".split(), load_rules())
for n in nuclei:
    print(n.id, repr(n.surface), [s.position for s in n.segments])

# The dog figure as FDG text: "was running" spans two token lines.
dog = read_fdg((figures / "dog_was_running.fdg").read_text())
print(render_ascii(dog))
print("projective:", is_projective(dog))

# "What would you like me to do": the object of "do" sits at the front.
what = read_fdg((figures / "what_would_you_like.fdg").read_text())
print(render_ascii(what))
print("projective:", is_projective(what))
for v in marcus_violations(what)[:3]:
    print("  ", what.nuclei[v.dependent].surface, "under", what.nuclei[v.regent].surface,
          "but", what.nuclei[v.intervener].surface, "in between is not")
for pair in crossing_arcs(what):
    print("   crossing:", pair.arc1, pair.arc2)

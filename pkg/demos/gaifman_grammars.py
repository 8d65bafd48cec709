"""A Gaifman grammar, its parses, and its context-free twin."""
from depgram import enumerate_language, parse_all, parse_grammar, recognize, to_cfg
from depgram.render import render_ascii

grammar = parse_grammar("""
cat V N P
rule V(N * N)
rule V(N * N P)
rule N(*)
rule N(* P)
rule P(* N)
word saw:V
word I:N
word man:N
word telescope:N
word with:P
root V
""")

sentence = "I saw man with telescope".split()
print("recognized:", recognize(grammar, sentence))

# Two attachments of the prepositional phrase.
for tree in parse_all(grammar, sentence):
    print(render_ascii(tree))

# The converted grammar generates the same strings.
cfg = to_cfg(grammar)
print(cfg)
lang = enumerate_language(grammar, 6)
print(len(lang), "strings up to length 6; same as CFG:", lang == enumerate_language(cfg, 6))
print(sorted(lang, key=lambda s: (len(s.split()), s))[:5])

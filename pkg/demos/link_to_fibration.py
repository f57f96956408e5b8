# framed links on the twisted-band disk -> Lefschetz fibrations -> open books

from nofib.groups import Word
from nofib.lefschetz import *
from nofib.openbook import total_space_h1

K = LinkComponent("K", Word.parse("a^2"), 0)   # a^2 on the one-band disk, framing 0
lf = harer_compile(FramedLinkDiagram(1, [K]))
print(lf.fiber)                                 # one extra hole from the framing fix
for c in lf.cycles:
    print(c.curve.id, c.curve.word, c.cls, c.origin, c.sign)
print(total_space_h1(boundary_openbook(lf)))    # boundary is S^1 x RP^2

twisted = harer_compile(FramedLinkDiagram(1, [LinkComponent("K", Word.parse("a^2"), 1)]))
print(twisted.fiber, len(twisted.cycles))       # Mobius band, 1 cycle

# a crossing between two components adds a torus handle
D = FramedLinkDiagram(1, [LinkComponent("K", Word.parse("a^2"), 1), LinkComponent("L", Word.parse("a^-2"), 3)],
                      [Crossing(("K", 0), ("L", 0), "x")])
lf = harer_compile(D)
print(lf.fiber, [c.curve.id for c in lf.cycles])
print(lf.fiber.euler + len(lf.cycles), 1 - D.p + len(D.components))   # equal

# Klein bottle fibrations over the sphere
for n in range(4):
    x = klein_fibration(n)
    print(n, lf_euler_char(x), lf_h1_over_sphere(x), relative_minimality(x).verdict)

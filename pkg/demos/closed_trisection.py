# the genus-three fibration with a section, wrinkled and glued into a closed diagram

from nofib.lefschetz import genus3_section_fibration, lf_euler_char
from nofib.trisect import closed_pipeline, draw_svg

lf = genus3_section_fibration()
print(lf.fiber, len(lf.cycles), lf.sections, lf.verified)
print(lf_euler_char(lf))

res = closed_pipeline(lf)
print(res.v.surface)        # neighborhood of section + fiber, genus 7
print(res.w.surface)        # complement, genus 29
print(res.diagram.surface)  # closed, genus 36
print(res.diagram.size, res.diagram.slide_count)
print(res.report)           # valid

res.w.slides[:5]
open("closed_trisection.svg", "w").write(draw_svg(res.diagram))

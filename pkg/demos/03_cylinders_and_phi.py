"""Cylinder certificates, the dovetailed procedure and nowhere-density probes."""

from htpq import Condition, nowhere_dense_probe, parse_descriptor, parse_poly, phi_decide
from htpq.category import negative_certificates, positive_certificates

f = parse_poly("10*x0^2 + 10*x1^2 - 1")
print("positive:", [c.condition.bits for c in positive_certificates(f, 4, 20)])
print("negative:", [c.condition.bits for c in negative_certificates(f, 4)])

for ring in ("include:", "include:2,5", "residue:3mod4", "random:seed=1"):
    print(f"phi over {ring}:", phi_decide(f, parse_descriptor(ring)))

for bits in ("", "0", "11", "0110"):
    out = nowhere_dense_probe(f, Condition(bits))
    print(f"from '{bits}': extension '{out.extension.bits}' ({out.certificate.kind})")

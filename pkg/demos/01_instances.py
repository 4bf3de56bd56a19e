"""
Reading, writing and generating instances
=========================================

Instances are square integer matrices in the plain LOLIB text layout: the
dimension, then n*n weights. An optional first line carries a name.
"""

import numpy as np

from lopmpm import GeneratorSpec, generate_instance, parse_instance, write_instance

text = """tiny
3
0 1 2
3 0 4
5 6 0
"""
inst = parse_instance(text)
print(inst.name, inst.n)
print(inst.weights)

# a random instance is a pure function of its spec
spec = GeneratorSpec(n=6, weight_low=0, weight_high=9, seed=4)
a = generate_instance(spec)
b = generate_instance(spec)
print(a.name, a.digest(), a == b)

# round trip through the text format
again = parse_instance(write_instance(a))
print("round trip exact:", np.array_equal(again.weights, a.weights))

"""Exact intersection theory on Grassmannians and projective bundles, with the divisor
computations on moduli of complete intersections and K3 surfaces built on top."""
from .characteristic import (
    KClass,
    chern_character_from_classes,
    chern_classes_from_character,
    dual,
    line_bundle,
    todd_class,
    twist,
)
from .errors import IntegrityError, PreconditionError, RingMismatchError
from .exact_ring import ChowClass, ChowRing, Monomial, Relation, bernoulli_numbers, todd_factor
from .grr import embed_structure_sheaf, grr_project, subbundle_class
from .lattices import IntegerLattice, congruence_sublattice, hermite_normal_form, smith_invariants
from .moduli import (
    bidegree_discriminant_class,
    equidegree_discriminant_degree,
    k3_euler_characteristic,
    k3_picard_table,
    lines_in_surfaces_divisor_degree,
    smooth_locus_picard,
)
from .varieties import (
    BundleData,
    grassmannian_lines_in_p3,
    integrate,
    product,
    projective_bundle,
    projective_space,
    pullback,
    pushforward_projection,
)

__version__ = "0.1.0"

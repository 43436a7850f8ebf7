"""Class numbers of quadratic extensions of F_q(t) and their mean values."""

from .gf import GF, FieldElement, field_of_order, make_field
from .polyring import Poly, enumerate_monic, is_irreducible, is_squarefree, parse_poly
from .places import LOCAL_TYPES, LocalType, Place, all_places_up_to, local_type, parse_place
from .quadext import QuadExt, enumerate_extensions, normalize
from .curvezeta import LPolynomial, class_number, l_polynomial, l_polynomial_oracle
from .series import PowerSeriesU, RationalFnU, euler_product_E, zeta_rational
from .localorbit import epsilon, local_zeta_closed, orbital_series, standard_rep
from .density import average_table, density_table, filtering_coefficients, mean_value_table

__version__ = "0.1.0"

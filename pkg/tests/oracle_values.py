"""Reference values produced by scripts/make_oracles.py (40-digit sympy/mpmath, no package code)."""

# W(sin z, sin 2z, e^{4iz}) at z = 0.3 + 0.1i
WRONSKIAN_1_2_KAPPA4_AT_03_01 = -1.9340063203567266 - 0.9642624887976631j

# zeros of W(sin 7z, sin 8z, e^{4iz}) in the strip, all simple
STREET_7_8_KAPPA4_NUMERATOR_ROOTS = [
    0j,
    0.25251959049468886 - 0.25169477991284595j,
    0.3204948701340667 + 0.06939403662820313j,
    0.705611465246823 - 0.2883989552179916j,
    0.7315871115996425 + 0.1197859274670345j,
    1.1401959687745136 - 0.30663115800596386j,
    1.1507120256901688 + 0.14072908653415284j,
    1.5707963267948966 - 0.3121305483337443j,
    1.5707963267948966 + 0.14681459694938084j,
    1.9908806278996245 + 0.14072908653415284j,
    2.0013966848152798 - 0.30663115800596386j,
    2.4100055419901505 + 0.1197859274670345j,
    2.43598118834297 - 0.2883989552179916j,
    2.8210977834557265 + 0.06939403662820313j,
    2.8890730630951045 - 0.25169477991284595j,
]

# real zeros of W(sin z, sin 5z) in (0, pi) other than pi/2
COLLINEAR_2_1_2_REAL_ZEROS = [0.9117382909684877, 2.2298543626213054]

# (z, zeta(z), wp(z)) for half-periods (pi/2, i pi/2) and (1, 0.3 + 0.8i)
WEIERSTRASS_SQUARE = [
    (0.3 + 0.2j, 2.3079836597601657 - 1.5399493576923668j, 2.963426037098832 - 7.08894821312858j),
    (1.1 - 0.4j, 0.7779929660739435 + 0.33772701029602487j, 0.6571006990670085 + 0.3765375664269515j),
]
WEIERSTRASS_SQUARE_ETA1 = 0.5 + 0j
WEIERSTRASS_OBLIQUE = [
    (0.37 + 0.11j, 2.4887468316196886 - 0.7487050280808877j, 5.608181343620422 - 3.5748318651720035j),
    (-0.5 + 0.6j, -0.7851235144177773 - 1.0474031015178231j, -0.06355750120798737 + 1.631528020503651j),
]
WEIERSTRASS_OBLIQUE_ETA1 = 0.8645344881966893 - 0.12166681722329806j

# Whittaker-Hill eigenvalues from the exact characteristic polynomial, ascending
WH_S5_ALPHA15_EIGENVALUES = [-25.244145016099033, -7.916407864998739, 6.826693273197067, 18.91640786499874,
                             24.917451742901967]
WH_S3_ALPHA08_EIGENVALUES = [-5.985221845696084, 2.72, 7.4252218456960835]

"""Frozen extended-precision reference values (see generate_oracles.py)."""
J1_AT_1 = 0.30116867893975678925
LOG_J50_AT_1 = -185.22422468602124437
LOG_ABS_H40_AT_1 = 135.632926982809305
LOG_ABS_T30_KR1 = -190.47833049431266624
LEGENDRE_1P50I = {
    2: (8.2300442035731240931, 3.1016033140031214429),
    10: (44.318495259623437478, 2.941657167388543501),
    50: (227.74257372123293726, 2.1419237175909101718),
    100: (457.67075090500928697, -1.9993358442831630287),
    150: (687.74193565495960454, 0.14258989424141411454),
    200: (917.87180355011939821, 2.2845156310834979937),
}
SPHERE_K3 = {
    0: (-0.51241803272582268665, -0.85556637916603813312),
    5: (4.3959839377030886627, -2.073985436717813822),
    10: (7.4845966631186360354, -0.19169715960445862876),
    20: (10.952273714784523734, 2.8695966442810279252),
    30: (13.678147549282913762, -0.68604759997768200016),
}
SPHERE_K3_FORWARD_IM = 2.1038832626735042003
BOX_BORN_K5 = {
    8: (29.202344416340380074, -2.1889424088783632077),
    10: (40.389500925469700572, -0.85496311697570356067),
    16: (69.171731906470627527, -0.070488060937710550499),
    20: (88.971388045107911963, -0.62014252311814902218),
    24: (108.51436964802664873, -1.1783066321733314742),
}
BALL_BORN_K4 = {
    0: (-2.7872855520653627321, 3.1415926535897932385),
    3: (2.2475339802179991806, 0.87579627235077503814),
    12: (10.169834707876469229, -1.258169566429848521),
}
LEMMA1_BALL_B30 = 0.94788932282490633694

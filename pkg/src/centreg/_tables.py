"""Embedded reference coefficient tables.

``G_TABLE[t]`` lists the de-biasing polynomial coefficients g_r(t) for
r = 1..t.  ``B_ROWS[T]`` lists, per diffusion horizon T, rows
(t, [coefficients]) where the k-th coefficient multiplies
delta^(s0 + k) * iota' Ahat^t iota with s0 = 2 for t = 1 and s0 = t + 1
otherwise.  Blank cells in the source tables are zeros.
"""

G_TABLE = {
    1: (1,),
    2: (-1, 1),
    3: (2, -2, 1),
    4: (-5, 4, -3, 1),
    5: (12, -8, 7, -4, 1),
    6: (-20, 8, -14, 11, -5, 1),
    7: (-12, 42, 10, -24, 16, -6, 1),
    8: (295, -340, 96, 22, -39, 22, -7, 1),
    9: (-1584, 1510, -655, 142, 48, -60, 29, -8, 1),
    10: (5623, -4712, 2552, -1043, 176, 94, -88, 37, -9, 1),
    11: (-12530, 8408, -6190, 4078, -1558, 178, 167, -124, 46, -10, 1),
    12: (-1806, 13088, 1068, -9444, 6542, -2170, 122, 275, -169, 56, -11, 1),
    13: (186702, -194318, 83832, -2150, -16554, 10028, -2836, -26, 427, -224, 67, -12, 1),
    14: (-1101323, 981200, -530446, 151068, 4548, -28178, 14700, -3480, -309, 633,
         -290, 79, -13, 1),
    15: (3938488, -3101066, 2005368, -879116, 213314, 22194, -46038, 20662, -3984,
         -780, 904, -368, 92, -14, 1),
    16: (-7533897, 4292162, -4310942, 3034670, -1337608, 281946, 58866, -72062,
         27916, -4178, -1503, 1252, -459, 106, -15, 1),
    17: (-13585642, 20354680, -4074647, -4907736, 4785512, -2019280, 333648,
         124800, -108304, 36312, -3829, -2554, 1690, -564, 121, -16, 1),
    18: (198008994, -188470026, 91205574, -17574745, -8228118, 7855844, -2899960,
         337020, 232853, -156828, 45486, -2629, -4022, 2232, -684, 137, -17, 1),
    19: (-999517964, 832916330, -496007668, 186419358, -25081260, -16309132,
         12404253, -3955392, 246742, 398862, -219512, 54786, -182, -6010, 2893,
         -820, 154, -18, 1),
    20: (3021609795, -2145039932, 1614224856, -871382472, 283591630, -23702626,
         -30152117, 18806973, -5122509, -1830, 641615, -297780, 63185, 4010,
         -8636, 3689, -973, 172, -19, 1),
}

B_ROWS = {
    1: [
        (1, [1]),
    ],
    2: [
        (1, [1, -3, 3]),
        (2, [3, -2]),
        (3, [2]),
    ],
    3: [
        (1, [1, -3, 7, -4, -8]),
        (2, [3, -4, 0, 10]),
        (3, [5, -2, -2]),
        (4, [4, -1]),
        (5, [2]),
    ],
    4: [
        (1, [1, -3, 7, -13, -15, 91, -182]),
        (2, [3, -4, 5, 24, -94, 160]),
        (3, [5, -7, -1, 36, -84]),
        (4, [8, -6, -2, 27]),
        (5, [7, -5]),
        (6, [5, -4]),
        (7, [3]),
    ],
    5: [
        (1, [1, -3, 7, -13, -4, 161, -500, 952, -654]),
        (2, [3, -4, 5, 24, -178, 450, -740, 314]),
        (3, [5, -7, 11, 57, -222, 456, -362]),
        (4, [8, -15, 6, 66, -225, 317]),
        (5, [12, -14, 4, 59, -148]),
        (6, [11, -13, 6, 32]),
        (7, [9, -12, 6]),
        (8, [7, -8]),
        (9, [4]),
    ],
    6: [
        (1, [1, -3, 7, -13, -4, 184, -819, 1869, -1935, -3737, 15981]),
        (2, [3, -4, 5, 24, -229, 770, -1496, 954, 4740, -14604]),
        (3, [5, -7, 11, 52, -346, 869, -1053, -1526, 7728]),
        (4, [8, -15, 28, 81, -406, 915, -674, -1883]),
        (5, [12, -28, 22, 99, -432, 814, -312]),
        (6, [17, -27, 19, 94, -359, 485]),
        (7, [16, -26, 21, 67, -209]),
        (8, [14, -25, 21, 35]),
        (9, [12, -21, 15]),
        (10, [9, -13]),
        (11, [5]),
    ],
    7: [
        (1, [1, -3, 7, -13, -4, 184, -1097, 3043, -3843, -6915, 49578, -115459, 80767]),
        (2, [3, -4, 5, 24, -229, 1088, -2552, 2198, 9142, -45912, 90964, -37634]),
        (3, [5, -7, 11, 52, -431, 1363, -2000, -2751, 23692, -59966, 51305]),
        (4, [8, -15, 28, 63, -565, 1565, -1556, -5348, 25674, -39288]),
        (5, [12, -28, 59, 102, -692, 1717, -1266, -5929, 18469]),
        (6, [17, -47, 52, 130, -739, 1625, -718, -4616]),
        (7, [23, -46, 48, 127, -669, 1263, -272]),
        (8, [22, -45, 50, 100, -516, 758]),
        (9, [20, -44, 50, 68, -306]),
        (10, [18, -40, 44, 33]),
        (11, [15, -32, 29]),
        (12, [11, -19]),
        (13, [6]),
    ],
    8: [
        (1, [1, -3, 7, -13, -4, 184, -1097, 4525, -7293, -6944, 83485, -256225,
             310955, 520469, -2445004]),
        (2, [3, -4, 5, 24, -229, 1088, -3969, 4898, 11110, -79100, 207636,
             -174066, -652454, 2204430]),
        (3, [5, -7, 11, 52, -431, 1963, -3592, -2432, 39251, -130367, 185191,
             177779, -1142919]),
        (4, [8, -15, 28, 63, -696, 2366, -3194, -7525, 52268, -127455, 81923,
             320735]),
        (5, [12, -28, 59, 58, -912, 2822, -3094, -10153, 55373, -107794, 30033]),
        (6, [17, -47, 110, 108, -1096, 3070, -2701, -12050, 51958, -73965]),
        (7, [23, -73, 102, 146, -1166, 2990, -1896, -11737, 35122]),
        (8, [30, -72, 97, 145, -1099, 2591, -1255, -7492]),
        (9, [29, -71, 99, 118, -943, 2064, -940]),
        (10, [27, -70, 99, 86, -732, 1305]),
        (11, [25, -66, 93, 51, -426]),
        (12, [22, -58, 78, 18]),
        (13, [18, -45, 49]),
        (14, [13, -26]),
        (15, [7]),
    ],
    9: [
        (1, [1, -3, 7, -13, -4, 184, -1097, 4525, -12637, -1360, 110968, -420423,
             695532, 681922, -7068240, 17664266, -13712687]),
        (2, [3, -4, 5, 24, -229, 1088, -3969, 9368, 8424, -109118, 350830,
             -448472, -1023716, 6464948, -13721396, 6724528]),
        (3, [5, -7, 11, 52, -431, 1963, -6002, 474, 51064, -209648, 389396,
             179724, -3281313, 9018463, -8293240]),
        (4, [8, -15, 28, 63, -696, 3367, -5914, -6669, 77446, -236871, 246153,
             850584, -4132503, 6454139]),
        (5, [12, -28, 59, 58, -1079, 4123, -6290, -11274, 91953, -236476, 139244,
             993350, -2918136]),
        (6, [17, -47, 110, 18, -1366, 4803, -6352, -15294, 101721, -231751,
             105547, 672714]),
        (7, [23, -73, 188, 79, -1614, 5172, -5880, -18707, 102925, -204469,
             74412]),
        (8, [30, -107, 179, 128, -1709, 5108, -4789, -19615, 88499, -132335]),
        (9, [38, -106, 173, 129, -1645, 4670, -3937, -15825, 53896]),
        (10, [37, -105, 175, 102, -1486, 4121, -3585, -8366]),
        (11, [35, -104, 175, 70, -1274, 3362, -2653]),
        (12, [33, -100, 169, 35, -968, 2058]),
        (13, [30, -92, 154, 2, -542]),
        (14, [26, -79, 125, -16]),
        (15, [21, -60, 76]),
        (16, [15, -34]),
        (17, [8]),
    ],
    10: [
        (1, [1, -3, 7, -13, -4, 184, -1097, 4525, -12637, 10890, 125858, -597596,
             1235468, 309432, -11044097, 36311072, -45046667, -75501514,
             347810028]),
        (2, [3, -4, 5, 24, -229, 1088, -3969, 9368, 211, -130730, 514002,
             -866532, -979926, 10410814, -28739014, 23733098, 95980642,
             -310601986]),
        (3, [5, -7, 11, 52, -431, 1963, -6002, 6504, 56591, -292720, 663931,
             -81390, -5051600, 18395415, -26721605, -26472010, 165085728]),
        (4, [8, -15, 28, 63, -696, 3367, -9914, -1678, 97369, -363531, 535304,
             1071910, -8050856, 19840070, -13232554, -47818679]),
        (5, [12, -28, 59, 58, -1079, 5644, -11058, -7738, 125398, -398107,
             394043, 1745080, -8688965, 16108742, -2368523]),
        (6, [17, -47, 110, 18, -1535, 6719, -11878, -13503, 148861, -422298,
             318022, 1897993, -7599134, 9772214]),
        (7, [23, -73, 188, -84, -1901, 7684, -12237, -18749, 165197, -429048,
             278089, 1667351, -4861956]),
        (8, [30, -107, 301, -11, -2225, 8199, -11710, -23857, 171609, -407905,
             236540, 1042204]),
        (9, [38, -150, 291, 50, -2347, 8154, -10298, -26127, 159555, -335522,
             149307]),
        (10, [47, -149, 284, 53, -2286, 7674, -9217, -22752, 124908, -199857]),
        (11, [46, -148, 286, 26, -2124, 7102, -8832, -15237, 70335]),
        (12, [44, -147, 286, -6, -1911, 6343, -7913, -6786]),
        (13, [42, -143, 280, -41, -1605, 5040, -5264]),
        (14, [39, -135, 265, -74, -1179, 2982]),
        (15, [35, -122, 236, -92, -637]),
        (16, [30, -103, 187, -76]),
        (17, [24, -77, 111]),
        (18, [17, -43]),
        (19, [9]),
    ],
}


def b_coefficients(T: int) -> dict:
    """Expand B_ROWS[T] into a {(t, s): coefficient} map, zeros omitted."""
    out = {}
    for t, values in B_ROWS[T]:
        s0 = 2 if t == 1 else t + 1
        for k, v in enumerate(values):
            if v:
                out[(t, s0 + k)] = int(v)
    return out

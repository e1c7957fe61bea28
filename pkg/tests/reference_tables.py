"""Reference Spearman rho and Kendall tau values for power generators.

Keys: base -> (a, b) -> values for n = 0, 1, 2, 3, 4.  Base names denote the
unreflected copula: "pi", "m", "w" and "k" (Clayton, theta = -0.7).
"""

RHO = {
    "pi": {
        (0.1, 0.1): (-0.0000, -0.0083, -0.0149, -0.0201, -0.0242),
        (0.1, 0.5): (-0.0000, -0.0525, -0.0708, -0.0783, -0.0816),
        (0.1, 0.9): (-0.0000, -0.1215, -0.1268, -0.1273, -0.1273),
        (0.5, 0.1): (-0.0000, -0.0525, -0.0708, -0.0783, -0.0816),
        (0.5, 0.5): (-0.0000, -0.2952, -0.3300, -0.3375, -0.3393),
        (0.5, 0.9): (-0.0000, -0.5419, -0.5497, -0.5500, -0.5500),
        (0.9, 0.1): (-0.0000, -0.1215, -0.1268, -0.1273, -0.1273),
        (0.9, 0.5): (-0.0000, -0.5419, -0.5497, -0.5500, -0.5500),
        (0.9, 0.9): (-0.0000, -0.8629, -0.8646, -0.8646, -0.8646),
    },
    "m": {
        (0.1, 0.1): (-1.0000, -0.8650, -0.7387, -0.6233, -0.5200),
        (0.1, 0.5): (-1.0000, -0.5610, -0.2996, -0.1747, -0.1218),
        (0.1, 0.9): (-1.0000, -0.2154, -0.1345, -0.1279, -0.1274),
        (0.5, 0.1): (-1.0000, -0.5610, -0.2996, -0.1747, -0.1218),
        (0.5, 0.5): (-1.0000, -0.4667, -0.3633, -0.3450, -0.3411),
        (0.5, 0.9): (-1.0000, -0.5611, -0.5505, -0.5501, -0.5501),
        (0.9, 0.1): (-1.0000, -0.2154, -0.1345, -0.1279, -0.1274),
        (0.9, 0.5): (-1.0000, -0.5611, -0.5505, -0.5501, -0.5501),
        (0.9, 0.9): (-1.0000, -0.8650, -0.8646, -0.8646, -0.8646),
    },
    "w": {
        (0.1, 0.1): (1.0000, 0.8548, 0.7350, 0.6349, 0.5502),
        (0.1, 0.5): (1.0000, 0.4891, 0.2249, 0.0794, 0.0008),
        (0.1, 0.9): (1.0000, 0.0037, -0.1135, -0.1259, -0.1272),
        (0.5, 0.1): (1.0000, 0.4891, 0.2249, 0.0794, 0.0008),
        (0.5, 0.5): (1.0000, 0.0167, -0.1859, -0.2677, -0.3049),
        (0.5, 0.9): (1.0000, -0.4639, -0.5406, -0.5491, -0.5500),
        (0.9, 0.1): (1.0000, 0.0037, -0.1135, -0.1259, -0.1272),
        (0.9, 0.5): (1.0000, -0.4637, -0.5406, -0.5491, -0.5500),
        (0.9, 0.9): (1.0000, -0.8302, -0.8613, -0.8643, -0.8645),
    },
    "k": {
        (0.1, 0.1): (-0.6844, -0.5775, -0.4828, -0.4007, -0.3310),
        (0.1, 0.5): (-0.6844, -0.3652, -0.2052, -0.1354, -0.1061),
        (0.1, 0.9): (-0.6844, -0.1754, -0.1314, -0.1277, -0.1273),
        (0.5, 0.1): (-0.6844, -0.3652, -0.2052, -0.1354, -0.1061),
        (0.5, 0.5): (-0.6844, -0.3988, -0.3519, -0.3426, -0.3406),
        (0.5, 0.9): (-0.6844, -0.5544, -0.5502, -0.5501, -0.5501),
        (0.9, 0.1): (-0.6844, -0.1754, -0.1314, -0.1277, -0.1273),
        (0.9, 0.5): (-0.6844, -0.5544, -0.5502, -0.5501, -0.5501),
        (0.9, 0.9): (-0.6844, -0.8643, -0.8646, -0.8646, -0.8646),
    },
}

TAU = {
    "pi": {
        (0.1, 0.1): (0.0000, -0.0055, -0.0099, -0.0134, -0.0162),
        (0.1, 0.5): (0.0000, -0.0351, -0.0473, -0.0523, -0.0545),
        (0.1, 0.9): (0.0000, -0.0837, -0.0871, -0.0874, -0.0874),
        (0.5, 0.1): (0.0000, -0.0351, -0.0473, -0.0523, -0.0545),
        (0.5, 0.5): (0.0000, -0.2111, -0.2338, -0.2387, -0.2399),
        (0.5, 0.9): (0.0000, -0.4368, -0.4410, -0.4412, -0.4412),
        (0.9, 0.1): (0.0000, -0.0837, -0.0871, -0.0874, -0.0874),
        (0.9, 0.5): (0.0000, -0.4372, -0.4410, -0.4412, -0.4412),
        (0.9, 0.9): (0.0000, -0.8063, -0.8064, -0.8064, -0.8064),
    },
    "m": {
        (0.1, 0.1): (-1.0000, -0.8065, -0.6457, -0.5139, -0.4073),
        (0.1, 0.5): (-1.0000, -0.4475, -0.2118, -0.1184, -0.0817),
        (0.1, 0.9): (-1.0000, -0.1495, -0.0923, -0.0879, -0.0875),
        (0.5, 0.1): (-1.0000, -0.4475, -0.2118, -0.1184, -0.0817),
        (0.5, 0.5): (-1.0000, -0.3333, -0.2561, -0.2437, -0.2411),
        (0.5, 0.9): (-1.0000, -0.4474, -0.4415, -0.4412, -0.4412),
        (0.9, 0.1): (-1.0000, -0.1495, -0.0923, -0.0879, -0.0875),
        (0.9, 0.5): (-1.0000, -0.4474, -0.4415, -0.4412, -0.4412),
        (0.9, 0.9): (-1.0000, -0.8065, -0.8064, -0.8064, -0.8064),
    },
    "w": {
        (0.1, 0.1): (1.0000, 0.8000, 0.6540, 0.5428, 0.4553),
        (0.1, 0.5): (1.0000, 0.4000, 0.1692, 0.0577, 0.0015),
        (0.1, 0.9): (1.0000, 0.0001, -0.0810, -0.0875, -0.0875),
        (0.5, 0.1): (1.0000, 0.4000, 0.1692, 0.0577, 0.0015),
        (0.5, 0.5): (1.0000, 0.0000, -0.1413, -0.1951, -0.2187),
        (0.5, 0.9): (1.0000, -0.4000, -0.4368, -0.4412, -0.4412),
        (0.9, 0.1): (1.0000, 0.0001, -0.0810, -0.0875, -0.0875),
        (0.9, 0.5): (1.0000, -0.4000, -0.4368, -0.4412, -0.4412),
        (0.9, 0.9): (1.0000, -0.8000, -0.8058, -0.8064, -0.8064),
    },
    "k": {
        (0.1, 0.1): (-0.5385, -0.4368, -0.3532, -0.2854, -0.2308),
        (0.1, 0.5): (-0.5385, -0.2569, -0.1390, -0.0909, -0.0710),
        (0.1, 0.9): (-0.5385, -0.1202, -0.0902, -0.0877, -0.0875),
        (0.5, 0.1): (-0.5385, -0.2569, -0.1390, -0.0909, -0.0710),
        (0.5, 0.5): (-0.5385, -0.2810, -0.2483, -0.2421, -0.2407),
        (0.5, 0.9): (-0.5385, -0.4436, -0.4413, -0.4412, -0.4412),
        (0.9, 0.1): (-0.5385, -0.1202, -0.0902, -0.0877, -0.0875),
        (0.9, 0.5): (-0.5385, -0.4436, -0.4413, -0.4412, -0.4412),
        (0.9, 0.9): (-0.5385, -0.8064, -0.8064, -0.8064, -0.8064),
    },
}


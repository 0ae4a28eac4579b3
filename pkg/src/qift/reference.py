"""Published reference values used by the acceptance suite and the CLI.

Pr_min per qubit count n for the integral transform (``PR_MIN_INTEGRAL``) and
for the modified AQFT with m = 3 (``PR_MIN_MAQFT3``), as printed.
"""

PR_MIN_INTEGRAL = {
    20: 0.3630, 21: 0.3450, 22: 0.3270, 23: 0.3108, 24: 0.2951, 25: 0.2802,
    26: 0.2661, 27: 0.2527, 28: 0.2399, 29: 0.2278, 30: 0.2163, 31: 0.2054,
    32: 0.1950, 33: 0.1852, 34: 0.1759,
}

PR_MIN_MAQFT3 = {
    20: 0.7568, 21: 0.7472, 22: 0.7375, 23: 0.7282, 24: 0.7188, 25: 0.7096,
    26: 0.7006, 27: 0.6916, 28: 0.6827, 29: 0.6740, 30: 0.6654, 31: 0.6569,
}

# (n, x0, r, y, RP) for the integral transform; in each pair only the second
# y lies inside the success window.
CASE_STUDIES = [
    (25, 85, 713, 23906944, 0.120148),
    (25, 85, 713, 23906945, 0.118273),
    (26, 211, 975, 1996058, 0.106606),
    (26, 211, 975, 1996059, 0.0898572),
    (27, 163, 674, 3186177, 0.146263),
    (27, 163, 674, 3186178, 0.143943),
]

# (n, y, recovered k, recovered r) for the pairs above
CASE_FRACTIONS = [
    (25, 23906945, 508, 713),
    (26, 1996059, 29, 975),
    (27, 3186178, 8, 337),
]

# Long peak-scan runs for the integral transform: (n, x0, r, Pr, MinPr(y)).
LONG_RUNS = [
    (32, 863, 11337, 0.195057, 0.103743),
    (32, 9774, 22239, 0.195051, 0.119318),
    (32, 17867, 21229, 0.195057, 0.120364),
    (32, 13559, 33225, 0.195049, 0.103555),
    (33, 17226, 39041, 0.185207, 0.114707),
    (33, 9244, 18267, 0.18524, 0.0967657),
    (33, 21533, 27663, 0.185205, 0.0969796),
    (34, 9244, 54337, 0.175864, 0.114707),
    (34, 26700, 36989, 0.174863, 0.103516),
]

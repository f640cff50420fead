"""Frozen reference vectors computed outside the package."""

# Peer-first, latest-first, random peer, single reply, N=100, n=40, v=10.
# Produced by a standalone scalar loop over P_{i+1} = P_i + min(P_i Z_i, 1 - P_i)
# with Z_i = c_i (1 - P_i)(1 - (1 - 1/v)^v), c_i = prod_{k<i} (1 - P_k (1 - P_k)).
PF_LATEST_RANDOM_N100_n40_v10 = [
    0.01,
    0.01644808344301,
    0.026880552478996518,
    0.04347625297727403,
    0.06917001017425684,
    0.1072959955432505,
    0.16036253913400675,
    0.22781486541129758,
    0.3040753050365892,
    0.3796734403570989,
    0.4460076333078708,
    0.49920843703762363,
    0.5397366161776865,
    0.5699408696444125,
    0.5923390329787328,
    0.6089964853994133,
    0.6214561199043509,
    0.6308344013146627,
    0.6379343227384129,
    0.6433361693220987,
    0.6474630024870652,
    0.6506262828376003,
    0.6530574446937454,
    0.6549298735279275,
    0.6563743737746129,
    0.6574901970368519,
    0.65835300783824,
    0.6590207074066874,
    0.6595377375261346,
    0.659938290755777,
    0.6602487236618311,
    0.6604893826585844,
    0.66067599271126,
    0.6608207180458223,
    0.6609329750845604,
    0.66102005716612,
    0.6610876156498763,
    0.6611400310416127,
    0.6611806996579763,
    0.6612122552795553,
]

"""Road and spare enumerations of the two smallest Triangle Tire World layouts, transcribed from their published drawings."""

TW1_EDGES = [((1, 1), (1, 2)),
 ((1, 1), (2, 1)),
 ((1, 2), (1, 3)),
 ((1, 2), (2, 2)),
 ((2, 1), (1, 2)),
 ((2, 1), (3, 1)),
 ((2, 2), (1, 3)),
 ((3, 1), (2, 2))]

TW1_SPARES = [(2, 1), (2, 2), (3, 1)]

TW2_EDGES = [((1, 1), (1, 2)),
 ((1, 1), (2, 1)),
 ((1, 2), (1, 3)),
 ((1, 2), (2, 2)),
 ((1, 3), (1, 4)),
 ((1, 3), (2, 3)),
 ((1, 4), (1, 5)),
 ((1, 4), (2, 4)),
 ((2, 1), (1, 2)),
 ((2, 1), (3, 1)),
 ((2, 2), (1, 3)),
 ((2, 3), (1, 4)),
 ((2, 3), (3, 3)),
 ((2, 4), (1, 5)),
 ((3, 1), (2, 2)),
 ((3, 1), (3, 2)),
 ((3, 1), (4, 1)),
 ((3, 2), (3, 3)),
 ((3, 2), (4, 2)),
 ((3, 3), (2, 4)),
 ((4, 1), (3, 2)),
 ((4, 1), (5, 1)),
 ((4, 2), (3, 3)),
 ((5, 1), (4, 2))]

TW2_SPARES = [(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 3), (4, 1), (4, 2), (5, 1)]

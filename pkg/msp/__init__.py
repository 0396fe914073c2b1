"""
Minimum substring partitioning (MSP) de Bruijn graph construction
Contains sequence packing, minimizer scanners, disk partitioning, id mapping/merging and the random-string model
"""

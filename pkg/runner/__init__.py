"""
Runner module for the phase pipeline
Contains the asynchronous orchestration of partition, map, merge, edges and the baselines
"""

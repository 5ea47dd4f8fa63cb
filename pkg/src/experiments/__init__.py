"""带种子的蒙特卡洛实验驱动"""

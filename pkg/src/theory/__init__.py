"""闭式概率界、穷举普查与结构事件判定"""

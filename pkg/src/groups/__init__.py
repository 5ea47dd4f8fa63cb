"""有限阿贝尔群：群运算、分类、结构枚举与随机连接集采样"""

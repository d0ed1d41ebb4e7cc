"""HTTP routes of the certification service"""

@Component("Wheel")
public class Wheel { }
